#include "gwave/runner.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

namespace gwave {

namespace {

std::string timestamp_now() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[64];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

ordered_json scenario_header(const Scenario& s, const std::string& command,
                             const RunnerOptions& opts) {
    ordered_json j;
    j["schema"] = "gwave-report/1";
    j["generated_at"] = opts.include_timestamp ? timestamp_now() : "";
    j["command"] = command;
    j["scenario"] = {{"name", s.name},
                     {"dimension", s.dimension},
                     {"family", s.family_kind},
                     {"grid", {{"k_min", s.k_min}, {"k_max", s.k_max}, {"base", s.base}}},
                     {"mode", s.mode}};
    return j;
}

void apply_options(TestParams& params, const Scenario& s, const RunnerOptions& opts) {
    params.threads = std::max(1, opts.threads);
    if (opts.eps_floor_k > 0) {
        double floor = std::pow(s.base, -static_cast<double>(opts.eps_floor_k));
        params.budget.eps_floor_1d = floor;
        params.budget.eps_floor_2d = floor;
    }
}

std::string expected_key(const std::string& point, const std::string& direction) {
    return point + "." + direction;
}

int exit_from_flags(bool mismatch, bool inconclusive) {
    if (mismatch) return 1;
    if (inconclusive) return 3;
    return 0;
}

} // namespace

RunOutputs run_command(const Scenario& s, const std::string& command, const RunnerOptions& opts) {
    RunOutputs out;
    out.report = scenario_header(s, command, opts);

    if (command == "selftest") {
        std::vector<std::string> lines;
        auto [passed, total] = run_selftest(lines);
        out.report["selftest"] = {{"passed", passed}, {"total", total}, {"checks", lines}};
        out.exit_code = passed == total ? 0 : 1;
        out.report["exit_code"] = out.exit_code;
        std::string fname = s.out_json.empty() ? command + ".json" : s.out_json;
        out.files.emplace_back(fname, out.report.dump(2) + "\n");
        return out;
    }

    ScenarioRuntime rt = build_runtime(s);
    apply_options(rt.params, s, opts);

    bool mismatch = false, inconclusive = false;

    if (command == "classify") {
        ordered_json nets = ordered_json::array();
        auto classify_net = [&](const std::string& name, const std::string& kind,
                                const ScalarNet& net) {
            ordered_json j;
            j["name"] = name;
            j["kind"] = kind;
            j["classification"] = to_json(classify_scale(net, rt.params.classify));
            j["negligible"] = to_json(is_negligible(net, rt.params.m_max, rt.params.classify));
            j["moderate"] = to_json(is_moderate(net, rt.params.n_max, rt.params.classify));
            nets.push_back(std::move(j));
        };
        for (size_t i = 0; i < rt.points.size(); ++i)
            classify_net(s.points[i].first, "point-norm", rt.points[i].net().norm());
        ordered_json values = ordered_json::array();
        for (size_t i = 0; i < rt.points.size(); ++i) {
            ScalarNet v = eval_at_point(rt.family, rt.points[i]);
            ordered_json j;
            j["point"] = s.points[i].first;
            j["classification"] = to_json(classify_scale(v, rt.params.classify));
            j["negligible"] = to_json(is_negligible(v, rt.params.m_max, rt.params.classify));
            j["moderate"] = to_json(is_moderate(v, rt.params.n_max, rt.params.classify));
            values.push_back(std::move(j));
        }
        out.report["nets"] = std::move(nets);
        out.report["family_at_points"] = std::move(values);
    } else if (command == "wavefront") {
        WavefrontTable table = wavefront_scan(rt.family, rt.points, rt.directions, s.mode, rt.params);
        out.report["wavefront"] = to_json(table);
        for (const WavefrontRow& row : table.rows) {
            if (row.report.verdict == Verdict::Inconclusive) inconclusive = true;
            auto it = s.expected.find(expected_key(row.point, row.direction));
            if (it != s.expected.end() && it->second != verdict_name(row.report.verdict))
                mismatch = true;
            std::string fname =
                s.out_csv_dir + "/" + slugify(row.point) + "_" + slugify(row.direction) + ".csv";
            out.files.emplace_back(fname, csv_decay_curves(row.report));
        }
    } else if (command == "singsupp") {
        SingularSupportReport rep =
            singular_support_scan(rt.family, rt.points, rt.directions, rt.params);
        out.report["singular_support"] = to_json(rep);
        for (const SingularSupportRow& row : rep.rows) {
            if (row.directional == Verdict::Inconclusive) inconclusive = true;
            if (!row.agree) mismatch = true;
            auto it = s.expected.find(row.point);
            if (it != s.expected.end()) {
                std::string got = row.agree ? "agree" : "disagree";
                if (it->second != got) mismatch = true;
            }
        }
    } else if (command == "consistency") {
        ConsistencyReport rep = consistency_check(rt.family, s.x0, s.xi0, s.r, s.samples, rt.grid,
                                                  rt.directions, rt.params);
        out.report["consistency"] = to_json(rep);
        if (!rep.consistent) mismatch = true;
        if (rep.classical.verdict == Verdict::Inconclusive) inconclusive = true;
        for (const ConsistencySample& smp : rep.refined) {
            bool mandated = smp.point == "x0";
            if (mandated && smp.verdict == Verdict::Inconclusive) inconclusive = true;
        }
        auto it = s.expected.find("consistent");
        if (it != s.expected.end() && (it->second == "true") != rep.consistent) mismatch = true;
        out.files.emplace_back(s.out_csv_dir + "/classical.csv", csv_decay_curves(rep.classical));
    } else {
        throw Error(ErrorKind::ValidationError, "unknown command '" + command + "'");
    }

    out.exit_code = exit_from_flags(mismatch, inconclusive);
    out.report["exit_code"] = out.exit_code;
    std::string fname = s.out_json.empty() ? command + ".json" : s.out_json;
    out.files.emplace_back(fname, out.report.dump(2) + "\n");
    return out;
}

namespace {

struct SelfTest {
    std::vector<std::string>& lines;
    int passed = 0, total = 0;

    void check(const std::string& name, bool ok) {
        ++total;
        if (ok) ++passed;
        lines.push_back(std::string(ok ? "PASS " : "FAIL ") + name);
    }
};

} // namespace

std::pair<int, int> run_selftest(std::vector<std::string>& lines) {
    SelfTest t{lines};
    auto grid = EpsilonGrid::geometric();

    // exact power-law fits
    bool ok = true;
    for (double p : {-3.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 3.0}) {
        ScalarNet net = ScalarNet::map(grid, [p](double e) { return std::pow(e, p); });
        SlopeFit f = fit_scale_exponent(net, 1.0);
        if (std::abs(f.exponent - (-p)) > 1e-9 || f.residual > 1e-9) ok = false;
    }
    t.check("exact power-law slope fits", ok);

    t.check("log(1/eps) classifies SlowScale",
            classify_scale(net_from_expr(parse("log(1/eps)", 1), grid)).kind == ScaleKind::SlowScale);
    t.check("1/log(1/eps) classifies SlowInfinitesimal",
            classify_scale(net_from_expr(parse("1/log(1/eps)", 1), grid)).kind ==
                ScaleKind::SlowInfinitesimal);
    {
        std::vector<cxd> v(grid->size());
        for (size_t i = 0; i < v.size(); ++i)
            v[i] = i % 2 == 0 ? 1.0 / (*grid)[i] : 1.0;
        t.check("alternating net is Indeterminate",
                classify_scale(ScalarNet(grid, v)).kind == ScaleKind::Indeterminate);
    }
    t.check("eps^2 negligible exactly to order 2",
            is_negligible(net_from_expr(parse("eps^2", 1), grid), 6).order == 2);
    t.check("log(1/eps) moderate with N*=1",
            is_moderate(net_from_expr(parse("log(1/eps)", 1), grid), 10).order == 1);

    // parser round trip
    {
        ExprAst a = parse("1/log(1/eps) + 2*eps^-2", 1);
        ExprAst b = parse(pretty_print(a), 1);
        t.check("parse-print-parse is idempotent", ast_equal(a, b) && ast_equal(b, parse(pretty_print(b), 1)));
    }

    // families: Leibniz spot check
    {
        auto u = embed_smooth(parse("sin(x1)", 1));
        auto v = embed_smooth(parse("exp(-x1^2)", 1));
        auto uv = product(u, v);
        bool leib = true;
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> ux(-1.0, 1.0);
        for (int i = 0; i < 20; ++i) {
            double x = ux(rng), eps = 0.25;
            CTaylor ju = u.jet1(eps, x), jv = v.jet1(eps, x), jp = uv.jet1(eps, x);
            cxd want = ju.derivative(2) * jv.derivative(0) +
                       2.0 * ju.derivative(1) * jv.derivative(1) +
                       ju.derivative(0) * jv.derivative(2);
            if (std::abs(want - jp.derivative(2)) > 1e-8 * (1.0 + std::abs(want))) leib = false;
        }
        t.check("product rule at order 2 on random points", leib);
    }

    // spectral sanity: Parseval + dilation identity at one eps
    {
        ResolutionBudget budget;
        auto p0 = GeneralizedPoint::constant(grid, {0.0, 0.0}, 1, "origin");
        auto one = embed_smooth(parse("1", 1));
        WindowSpec cut = scaled_cutoff(p0, [](double e) { return default_cutoff_order(e, 6); });
        SpectrumSlice s = windowed_spectrum(one, cut, 6, (*grid)[6], budget);
        t.check("Parseval within 1e-6", s.parseval_rel_err < 1e-6);
        const BumpProfile& pl = BumpProfile::plateau();
        double w = cut.width_at(6), worst = 0, peak = w * std::abs(pl.fourier(1, 0.0));
        for (long i = 0; i < s.n[0]; ++i) {
            double xi = s.xi_at(i, 0)[0];
            if (std::abs(xi) > 60.0 / w) continue;
            double ref = w * pl.fourier(1, w * xi);
            if (std::abs(ref) < 1e-2 * peak) continue;
            worst = std::max(worst, std::abs(std::abs(s.at(i, 0)) - std::abs(ref)) / std::abs(ref));
        }
        t.check("dilation identity within 1e-3", worst < 1e-3);
    }

    // cone enlargement: randomized geometry
    {
        auto small = EpsilonGrid::geometric(6, 13);
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> uang(0.0, 2.0 * M_PI), urad(0.05, 0.5),
            umag(1.0, 100.0), ufr(0.0, 1.0);
        bool all_ok = true;
        for (int trial = 0; trial < 1000; ++trial) {
            double base_ang = uang(rng), rr = urad(rng);
            auto xi0 = GeneralizedDirection::constant(small, {std::cos(base_ang), std::sin(base_ang)},
                                                      2, "axis");
            ScalarNet rnet = ScalarNet::map(small, [rr](double) { return rr; });
            double zang = base_ang + 2.0 * std::asin(std::min(1.0, rr * ufr(rng) / 2.0));
            double zmag = umag(rng);
            VectorNet zeta = VectorNet::map(small, 2, [&](double) {
                return Vec2{zmag * std::cos(zang), zmag * std::sin(zang)};
            });
            double pang = uang(rng), pmag = rr * zmag * ufr(rng);
            VectorNet eta = VectorNet::map(small, 2, [&](double) {
                return Vec2{zmag * std::cos(zang) + pmag * std::cos(pang),
                            zmag * std::sin(zang) + pmag * std::sin(pang)};
            });
            if (!cone_enlargement_check(xi0, rnet, zeta, eta).ok) all_ok = false;
        }
        t.check("cone enlargement holds on 1000 random trials", all_ok);
    }

    // fast verdict smoke on a reduced grid
    {
        auto small = EpsilonGrid::geometric(6, 14);
        TestParams params;
        auto delta = mollified_distribution(MollifiedKind::Delta, parse("0", 1), BumpSpec{}, small);
        auto origin = GeneralizedPoint::constant(small, {0.0, 0.0}, 1, "origin");
        auto off = GeneralizedPoint::constant(small, {0.5, 0.0}, 1, "off");
        auto plus = GeneralizedDirection::constant(small, {1.0, 0.0}, 1, "plus");
        t.check("delta singular at the origin",
                refined_regularity_test(delta, origin, plus, params).verdict == Verdict::Singular);
        t.check("delta regular away from its support",
                refined_regularity_test(delta, off, plus, params).verdict == Verdict::Regular);
    }

    return {t.passed, t.total};
}

} // namespace gwave
