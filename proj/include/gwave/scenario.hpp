#ifndef GWAVE_SCENARIO_HPP
#define GWAVE_SCENARIO_HPP

#include "gwave/wavefront.hpp"

#include <map>
#include <string>
#include <vector>

namespace gwave {

/// Parsed scenario file (INI-style sections; see docs/scenario-format.md).
struct Scenario {
    std::string name = "scenario";
    int dimension = 1;

    int k_min = 6, k_max = 20;
    double base = 2.0;

    std::string family_kind;
    std::map<std::string, std::string> family_args;

    // named vector expressions, one per coordinate
    std::vector<std::pair<std::string, std::vector<ExprAst>>> points;
    std::vector<std::pair<std::string, std::vector<ExprAst>>> directions;

    std::string mode = "refined";
    int m_max = 6, n_max = 10, a_max = 4;
    double r = 0.25;
    int samples = 8;
    ExprAst cutoff_k;  // optional order-schedule expression in eps
    Vec2 x0{0.0, 0.0}, xi0{1.0, 0.0};

    std::map<std::string, std::string> expected;

    std::string out_json;     // default: <command>.json
    std::string out_csv_dir = "curves";
};

Scenario load_scenario(const std::string& path);
Scenario parse_scenario_text(const std::string& text, const std::string& origin = "<memory>");

/// scenario materialized against the toolkit
struct ScenarioRuntime {
    GridPtr grid;
    RepFamily family;
    std::vector<GeneralizedPoint> points;
    std::vector<GeneralizedDirection> directions;
    TestParams params;
};

ScenarioRuntime build_runtime(const Scenario& s);

} // namespace gwave

#endif
