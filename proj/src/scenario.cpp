#include "gwave/scenario.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace gwave {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

/// "(a, b)" -> {"a","b"}; bare text -> {text}; respects nested parens
std::vector<std::string> split_vector(const std::string& text) {
    std::string t = trim(text);
    std::vector<std::string> parts;
    if (!t.empty() && t.front() == '(' && t.back() == ')') {
        std::string inner = t.substr(1, t.size() - 2);
        int depth = 0;
        std::string cur;
        for (char c : inner) {
            if (c == '(') ++depth;
            if (c == ')') --depth;
            if (c == ',' && depth == 0) {
                parts.push_back(trim(cur));
                cur.clear();
            } else {
                cur += c;
            }
        }
        parts.push_back(trim(cur));
    } else {
        parts.push_back(t);
    }
    return parts;
}

struct RawScenario {
    std::vector<std::tuple<std::string, std::string, std::string, long>> entries;

    const std::string* find(const std::string& sec, const std::string& key) const {
        for (const auto& [s, k, v, l] : entries)
            if (s == sec && k == key) return &v;
        return nullptr;
    }
    std::vector<std::pair<std::string, std::string>> section(const std::string& sec) const {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& [s, k, v, l] : entries)
            if (s == sec) out.emplace_back(k, v);
        return out;
    }
    long line_of(const std::string& sec, const std::string& key) const {
        for (const auto& [s, k, v, l] : entries)
            if (s == sec && k == key) return l;
        return -1;
    }
};

RawScenario parse_ini(const std::string& text) {
    RawScenario raw;
    std::istringstream in(text);
    std::string line, section;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']' || t.size() < 3)
                throw Error(ErrorKind::ParseError, "malformed section header", lineno);
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorKind::ParseError, "expected 'key = value'", lineno);
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty()) throw Error(ErrorKind::ParseError, "empty key", lineno);
        if (section.empty()) throw Error(ErrorKind::ParseError, "key outside any [section]", lineno);
        raw.entries.emplace_back(section, key, value, lineno);
    }
    return raw;
}

double parse_number(const RawScenario& raw, const std::string& sec, const std::string& key,
                    const std::string& text) {
    try {
        size_t pos = 0;
        double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (...) {
        throw Error(ErrorKind::ValidationError,
                    sec + "." + key + ": expected a number, got '" + text + "'", raw.line_of(sec, key));
    }
}

int parse_int(const RawScenario& raw, const std::string& sec, const std::string& key,
              const std::string& text) {
    double v = parse_number(raw, sec, key, text);
    if (v != std::floor(v))
        throw Error(ErrorKind::ValidationError, sec + "." + key + ": expected an integer",
                    raw.line_of(sec, key));
    return static_cast<int>(v);
}

/// per-component eps-expressions
std::vector<ExprAst> parse_eps_vector(const std::string& text, int dim, long line,
                                      const std::string& field) {
    std::vector<std::string> parts = split_vector(text);
    if (static_cast<int>(parts.size()) != dim)
        throw Error(ErrorKind::ValidationError,
                    field + ": expected " + std::to_string(dim) + " component(s)", line);
    std::vector<ExprAst> out;
    for (const std::string& p : parts) {
        try {
            out.push_back(parse(p, 1));
        } catch (const Error& e) {
            throw Error(ErrorKind::ParseError, field + ": " + e.what(), line);
        }
        if (out.back().uses_coords())
            throw Error(ErrorKind::ValidationError, field + ": coordinates are not allowed here", line);
    }
    return out;
}

} // namespace

Scenario parse_scenario_text(const std::string& text, const std::string& origin) {
    RawScenario raw = parse_ini(text);
    Scenario s;

    if (const std::string* v = raw.find("scenario", "name")) s.name = *v;
    if (const std::string* v = raw.find("scenario", "dimension"))
        s.dimension = parse_int(raw, "scenario", "dimension", *v);
    if (s.dimension != 1 && s.dimension != 2)
        throw Error(ErrorKind::ValidationError, "scenario.dimension must be 1 or 2");

    if (const std::string* v = raw.find("grid", "k_min")) s.k_min = parse_int(raw, "grid", "k_min", *v);
    if (const std::string* v = raw.find("grid", "k_max")) s.k_max = parse_int(raw, "grid", "k_max", *v);
    if (const std::string* v = raw.find("grid", "base")) s.base = parse_number(raw, "grid", "base", *v);

    const std::string* kind = raw.find("family", "kind");
    if (!kind) throw Error(ErrorKind::ValidationError, "family.kind is required");
    s.family_kind = *kind;
    for (const auto& [k, v] : raw.section("family"))
        if (k != "kind") s.family_args[k] = v;

    for (const auto& [name, v] : raw.section("points"))
        s.points.emplace_back(name,
                              parse_eps_vector(v, s.dimension, raw.line_of("points", name),
                                               "points." + name));
    for (const auto& [name, v] : raw.section("directions"))
        s.directions.emplace_back(name,
                                  parse_eps_vector(v, s.dimension, raw.line_of("directions", name),
                                                   "directions." + name));

    if (const std::string* v = raw.find("test", "mode")) s.mode = *v;
    if (const std::string* v = raw.find("test", "M_max")) s.m_max = parse_int(raw, "test", "M_max", *v);
    if (const std::string* v = raw.find("test", "N_max")) s.n_max = parse_int(raw, "test", "N_max", *v);
    if (const std::string* v = raw.find("test", "A_max")) s.a_max = parse_int(raw, "test", "A_max", *v);
    if (const std::string* v = raw.find("test", "r")) s.r = parse_number(raw, "test", "r", *v);
    if (const std::string* v = raw.find("test", "samples"))
        s.samples = parse_int(raw, "test", "samples", *v);
    if (const std::string* v = raw.find("test", "cutoff_k"); v && !v->empty()) {
        try {
            s.cutoff_k = parse(*v, 1);
        } catch (const Error& e) {
            throw Error(ErrorKind::ParseError, std::string("test.cutoff_k: ") + e.what(),
                        raw.line_of("test", "cutoff_k"));
        }
    }
    auto read_vec2 = [&](const char* key, Vec2& out) {
        if (const std::string* v = raw.find("test", key)) {
            long line = raw.line_of("test", key);
            auto exprs = parse_eps_vector(*v, s.dimension, line, std::string("test.") + key);
            for (size_t d = 0; d < exprs.size(); ++d) {
                if (exprs[d].uses_eps())
                    throw Error(ErrorKind::ValidationError,
                                std::string("test.") + key + " must be a standard (constant) vector",
                                line);
                out[d] = eval_scalar(exprs[d], 0.5).real();
            }
        }
    };
    read_vec2("x0", s.x0);
    read_vec2("xi0", s.xi0);

    for (const auto& [k, v] : raw.section("expected")) s.expected[k] = v;

    if (const std::string* v = raw.find("output", "json")) s.out_json = *v;
    if (const std::string* v = raw.find("output", "csv_dir")) s.out_csv_dir = *v;

    if (s.mode != "refined" && s.mode != "classical")
        throw Error(ErrorKind::ValidationError, "test.mode must be 'refined' or 'classical'");
    if (s.k_max <= s.k_min)
        throw Error(ErrorKind::ValidationError, "grid.k_max must exceed grid.k_min");
    (void)origin;
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open scenario file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario_text(ss.str(), path);
}

namespace {

ExprAst family_expr(const Scenario& s, const std::string& key, const std::string& fallback, int dim) {
    auto it = s.family_args.find(key);
    std::string text = it != s.family_args.end() ? it->second : fallback;
    if (text.empty())
        throw Error(ErrorKind::ValidationError,
                    "family." + key + " is required for kind " + s.family_kind);
    try {
        return parse(text, dim);
    } catch (const Error& e) {
        throw Error(ErrorKind::ValidationError, "family." + key + ": " + e.what());
    }
}

Vec2 constant_vec(const Scenario& s, const std::string& key, Vec2 fallback) {
    auto it = s.family_args.find(key);
    if (it == s.family_args.end()) return fallback;
    std::vector<std::string> comps = split_vector(it->second);
    if (static_cast<int>(comps.size()) != s.dimension)
        throw Error(ErrorKind::ValidationError, "family." + key + " needs one component per axis");
    Vec2 v{0.0, 0.0};
    for (size_t d = 0; d < comps.size(); ++d) v[d] = eval_scalar(parse(comps[d], 1), 0.5).real();
    return v;
}

RepFamily build_family(const Scenario& s, const GridPtr& grid) {
    const std::string& kind = s.family_kind;
    RepFamily fam = [&]() -> RepFamily {
        if (kind == "smooth") return embed_smooth(family_expr(s, "expr", "", s.dimension));
        if (kind == "delta" || kind == "delta_squared" || kind == "dirac_derivative" ||
            kind == "heaviside") {
            if (s.dimension != 1)
                throw Error(ErrorKind::ValidationError, "mollified families are 1-dimensional");
            MollifiedKind mk = kind == "dirac_derivative" ? MollifiedKind::DiracDerivative
                               : kind == "heaviside"      ? MollifiedKind::Heaviside
                                                          : MollifiedKind::Delta;
            RepFamily base =
                mollified_distribution(mk, family_expr(s, "center", "0", 1), BumpSpec{}, grid);
            if (kind == "delta_squared") return product(base, base);
            return base;
        }
        if (kind == "plane_wave") {
            auto it = s.family_args.find("direction");
            if (it == s.family_args.end())
                throw Error(ErrorKind::ValidationError, "family.direction is required for plane waves");
            std::vector<std::string> comps = split_vector(it->second);
            if (static_cast<int>(comps.size()) != s.dimension)
                throw Error(ErrorKind::ValidationError,
                            "family.direction needs one component per axis");
            std::vector<ExprAst> dir;
            for (const std::string& c : comps) dir.push_back(parse(c, 1));

            BumpSpec env;
            env.profile = BumpProfile::Kind::Plateau;
            env.center = constant_vec(s, "envelope_center", {0.0, 0.0});
            auto rit = s.family_args.find("envelope_radius");
            env.radius = rit != s.family_args.end() ? std::stod(rit->second) : 0.5;
            return plane_wave(family_expr(s, "amplitude", "1", 1),
                              family_expr(s, "frequency", "", 1), dir, env);
        }
        throw Error(ErrorKind::ValidationError, "unknown family.kind '" + kind + "'");
    }();

    if (auto it = s.family_args.find("scale"); it != s.family_args.end())
        fam = scale(fam, parse(it->second, 1));
    if (auto it = s.family_args.find("translate"); it != s.family_args.end()) {
        std::vector<std::string> comps = split_vector(it->second);
        if (static_cast<int>(comps.size()) != s.dimension)
            throw Error(ErrorKind::ValidationError, "family.translate needs one component per axis");
        std::vector<ExprAst> exprs;
        for (const std::string& c : comps) exprs.push_back(parse(c, 1));
        int dim = s.dimension;
        VectorNet y = VectorNet::map(grid, dim, [&exprs, dim](double e) {
            Vec2 v{0.0, 0.0};
            for (int d = 0; d < dim; ++d)
                v[static_cast<size_t>(d)] = eval_scalar(exprs[static_cast<size_t>(d)], e).real();
            return v;
        });
        fam = translate(fam, y);
    }
    return fam;
}

} // namespace

ScenarioRuntime build_runtime(const Scenario& s) {
    GridPtr grid = EpsilonGrid::geometric(s.k_min, s.k_max, s.base);
    RepFamily fam = build_family(s, grid);
    int dim = s.dimension;

    std::vector<GeneralizedPoint> points;
    for (const auto& [name, exprs] : s.points) {
        const auto& ex = exprs;
        VectorNet net = VectorNet::map(grid, dim, [&ex, dim](double e) {
            Vec2 v{0.0, 0.0};
            for (int d = 0; d < dim; ++d)
                v[static_cast<size_t>(d)] = eval_scalar(ex[static_cast<size_t>(d)], e).real();
            return v;
        });
        points.emplace_back(std::move(net), name);
    }
    std::vector<GeneralizedDirection> directions;
    for (const auto& [name, exprs] : s.directions) {
        const auto& ex = exprs;
        VectorNet net = VectorNet::map(grid, dim, [&ex, dim](double e) {
            Vec2 v{0.0, 0.0};
            for (int d = 0; d < dim; ++d)
                v[static_cast<size_t>(d)] = eval_scalar(ex[static_cast<size_t>(d)], e).real();
            return v;
        });
        directions.emplace_back(net, name);
    }

    TestParams params;
    params.m_max = s.m_max;
    params.n_max = s.n_max;
    params.a_max = s.a_max;
    params.window_radius = s.r;
    if (s.cutoff_k) {
        ExprAst k = s.cutoff_k;
        params.schedule = [k](double eps) {
            return std::max(2, static_cast<int>(std::floor(eval_scalar(k, eps).real())));
        };
    }
    return ScenarioRuntime{grid, fam, std::move(points), std::move(directions), params};
}

} // namespace gwave
