#ifndef GWAVE_WAVEFRONT_HPP
#define GWAVE_WAVEFRONT_HPP

#include "gwave/microfft.hpp"

#include <string>
#include <vector>

namespace gwave {

enum class Verdict { Regular, Singular, Inconclusive };
const char* verdict_name(Verdict v);

struct RowReport {
    int m = 0;
    bool pass = false;
    bool hard_fail = false;       // failed with >= 0.5 order margin
    bool inconclusive = false;
    ScaleVerdict verdict;         // is_negligible on the sup-net
    std::vector<double> eps;      // decay curve for CSV export
    std::vector<double> sup;
    int empty_cells = 0;
    int dropped_cells = 0;
};

struct WeightedReport {
    bool pass = false;
    bool decisive_fail = false;
    bool all_moderate = true;
    double growth = 0.0;          // fitted slope of N(m) over m
    std::vector<int> orders;
    std::vector<int> n_values;    // -1 where not moderate
};

struct RegularityReport {
    std::string family, point, direction;
    std::string mode;  // "refined" | "classical"
    int m_requested = 6;
    int m_effective = 0;
    std::string schedule_desc;
    std::vector<RowReport> rows;       // decay route, m = 1..m_effective
    WeightedReport weighted;           // weighted route, m = 1..m_requested
    Verdict decay_verdict = Verdict::Inconclusive;
    Verdict weighted_verdict = Verdict::Inconclusive;
    Verdict verdict = Verdict::Inconclusive;
    bool routes_agree = true;
    int empty_cells = 0, dropped_cells = 0;
    double parseval_max = 0.0;
    std::string note;
};

struct TestParams {
    int m_max = 6;
    int n_max = 10;
    int a_max = 4;
    double window_radius = 0.25;              // classical window r (plateau r/2)
    std::function<int(double)> schedule;      // cutoff order k_eps; default derived from m_max
    ResolutionBudget budget;
    ClassifyParams classify;
    int threads = 1;

    int order_at(double eps) const {
        return schedule ? schedule(eps) : default_cutoff_order(eps, m_max);
    }
};

RegularityReport refined_regularity_test(const RepFamily& u, const GeneralizedPoint& x0,
                                         const GeneralizedDirection& xi0, const TestParams& params = {});

/// shared-window variant: reuses a SliceSet across directions
RegularityReport refined_regularity_with_slices(const SliceSet& slices, const std::string& family,
                                                const std::string& point,
                                                const GeneralizedDirection& xi0,
                                                const TestParams& params = {});

RegularityReport classical_regularity_test(const RepFamily& u, Vec2 x0, Vec2 xi0,
                                           const GridPtr& grid, const TestParams& params = {});

struct WavefrontRow {
    std::string point, direction;
    RegularityReport report;
};

struct WavefrontTable {
    std::string family;
    std::string mode;
    std::vector<WavefrontRow> rows;
};

WavefrontTable wavefront_scan(const RepFamily& u, const std::vector<GeneralizedPoint>& points,
                              const std::vector<GeneralizedDirection>& directions,
                              const std::string& mode, const TestParams& params = {});

struct SingularSupportRow {
    std::string point;
    DerivativeBoundReport derivative;           // column (a)
    Verdict directional = Verdict::Inconclusive;  // column (b): conjunction over directions
    std::vector<std::pair<std::string, Verdict>> per_direction;
    bool agree = false;
};

struct SingularSupportReport {
    std::string family;
    std::vector<SingularSupportRow> rows;
};

SingularSupportReport singular_support_scan(const RepFamily& u,
                                            const std::vector<GeneralizedPoint>& points,
                                            const std::vector<GeneralizedDirection>& extra_directions,
                                            const TestParams& params = {});

struct ConsistencySample {
    std::string point, direction;
    Verdict verdict = Verdict::Inconclusive;
};

struct ConsistencyReport {
    RegularityReport classical;
    std::vector<ConsistencySample> refined;
    bool consistent = false;
    bool any_inconclusive = false;
};

/// Classical test at the standard pair vs refined tests over sampled
/// generalized points/directions in the r-ball. `extra_directions` (scenario
/// nets) are included when their distance to xi0 stays within r on the tail.
ConsistencyReport consistency_check(const RepFamily& u, Vec2 x0, Vec2 xi0, double r, int samples,
                                    const GridPtr& grid,
                                    const std::vector<GeneralizedDirection>& extra_directions,
                                    const TestParams& params = {});

} // namespace gwave

#endif
