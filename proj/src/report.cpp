#include "gwave/report.hpp"

#include <cmath>
#include <sstream>

namespace gwave {

ordered_json json_number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

ordered_json to_json(const ScaleVerdict& v) {
    ordered_json j;
    j["kind"] = scale_kind_name(v.kind);
    if (v.kind == ScaleKind::Negligible || v.kind == ScaleKind::Moderate) j["order"] = v.order;
    j["fit_exponent"] = json_number(v.fit_exponent);
    j["residual"] = json_number(v.residual);
    return j;
}

ordered_json to_json(const SlopeFit& f) {
    ordered_json j;
    j["exponent"] = json_number(f.exponent);
    j["residual"] = json_number(f.residual);
    j["points_used"] = f.points_used;
    return j;
}

ordered_json to_json(const RegularityReport& r) {
    ordered_json j;
    j["subject"] = {{"family", r.family}, {"point", r.point}, {"direction", r.direction}};
    j["mode"] = r.mode;
    j["m_requested"] = r.m_requested;
    j["m_effective"] = r.m_effective;
    j["cutoff_schedule"] = r.schedule_desc;
    ordered_json rows = ordered_json::array();
    for (const RowReport& row : r.rows) {
        ordered_json rj;
        rj["m"] = row.m;
        rj["required_order"] = row.m;
        rj["pass"] = row.pass;
        rj["hard_fail"] = row.hard_fail;
        rj["inconclusive"] = row.inconclusive;
        rj["fitted_exponent"] = json_number(-row.verdict.fit_exponent);  // decay convention
        rj["residual"] = json_number(row.verdict.residual);
        rj["verdict_kind"] = scale_kind_name(row.verdict.kind);
        rj["negligible_order"] = row.verdict.kind == ScaleKind::Negligible ? row.verdict.order : 0;
        rj["sup_first"] = row.sup.empty() ? ordered_json(nullptr) : json_number(row.sup.front());
        rj["sup_last"] = row.sup.empty() ? ordered_json(nullptr) : json_number(row.sup.back());
        rj["cells"] = row.sup.size();
        rj["empty_cells"] = row.empty_cells;
        rj["dropped_cells"] = row.dropped_cells;
        rows.push_back(std::move(rj));
    }
    j["rows"] = std::move(rows);
    ordered_json w;
    w["pass"] = r.weighted.pass;
    w["decisive_fail"] = r.weighted.decisive_fail;
    w["all_moderate"] = r.weighted.all_moderate;
    w["growth_slope"] = json_number(r.weighted.growth);
    w["orders"] = r.weighted.orders;
    w["N"] = r.weighted.n_values;
    j["weighted"] = std::move(w);
    j["decay_verdict"] = verdict_name(r.decay_verdict);
    j["weighted_verdict"] = verdict_name(r.weighted_verdict);
    j["verdict"] = verdict_name(r.verdict);
    j["diagnostics"] = {{"routes_agree", r.routes_agree},
                        {"empty_cells", r.empty_cells},
                        {"dropped_cells", r.dropped_cells},
                        {"parseval_max_rel_err", json_number(r.parseval_max)},
                        {"note", r.note}};
    return j;
}

ordered_json to_json(const WavefrontTable& t) {
    ordered_json j;
    j["family"] = t.family;
    j["mode"] = t.mode;
    ordered_json rows = ordered_json::array();
    for (const WavefrontRow& r : t.rows) {
        ordered_json rj;
        rj["point"] = r.point;
        rj["direction"] = r.direction;
        rj["verdict"] = verdict_name(r.report.verdict);
        rj["report"] = to_json(r.report);
        rows.push_back(std::move(rj));
    }
    j["rows"] = std::move(rows);
    return j;
}

ordered_json to_json(const DerivativeBoundReport& d) {
    ordered_json j;
    j["pass"] = d.pass;
    j["n_star"] = d.n_star;
    j["all_moderate"] = d.all_moderate;
    j["alpha_growth"] = json_number(d.alpha_growth);
    j["m_growth"] = json_number(d.m_growth);
    j["n_by_alpha_order"] = d.n_by_alpha_order;
    j["n_by_m"] = d.n_by_m;
    return j;
}

ordered_json to_json(const SingularSupportReport& s) {
    ordered_json j;
    j["family"] = s.family;
    ordered_json rows = ordered_json::array();
    for (const SingularSupportRow& r : s.rows) {
        ordered_json rj;
        rj["point"] = r.point;
        rj["derivative_bound"] = to_json(r.derivative);
        rj["directional_verdict"] = verdict_name(r.directional);
        ordered_json dirs = ordered_json::array();
        for (const auto& [name, v] : r.per_direction)
            dirs.push_back({{"direction", name}, {"verdict", verdict_name(v)}});
        rj["directions"] = std::move(dirs);
        rj["agree"] = r.agree;
        rows.push_back(std::move(rj));
    }
    j["rows"] = std::move(rows);
    return j;
}

ordered_json to_json(const ConsistencyReport& c) {
    ordered_json j;
    j["classical"] = to_json(c.classical);
    ordered_json rows = ordered_json::array();
    for (const ConsistencySample& s : c.refined)
        rows.push_back({{"point", s.point}, {"direction", s.direction}, {"verdict", verdict_name(s.verdict)}});
    j["refined_samples"] = std::move(rows);
    j["consistent"] = c.consistent;
    j["any_inconclusive"] = c.any_inconclusive;
    return j;
}

ordered_json to_json(const LocalEqualityReport& r) {
    ordered_json j;
    j["equal"] = r.equal;
    ordered_json rows = ordered_json::array();
    for (const PerOrderRow& row : r.rows) {
        rows.push_back({{"m", row.m},
                        {"pass", row.pass},
                        {"verdict", to_json(row.verdict)},
                        {"sup_first", json_number(row.sup_first)},
                        {"sup_last", json_number(row.sup_last)}});
    }
    j["rows"] = std::move(rows);
    return j;
}

std::string csv_decay_curves(const RegularityReport& r) {
    std::ostringstream os;
    os << "m,eps,sup,fitted_exponent\n";
    os.precision(17);
    for (const RowReport& row : r.rows) {
        double fitted = -row.verdict.fit_exponent;
        for (size_t i = 0; i < row.eps.size(); ++i) {
            os << row.m << ',' << row.eps[i] << ',' << row.sup[i] << ',';
            if (std::isfinite(fitted))
                os << fitted;
            os << '\n';
        }
    }
    return os.str();
}

std::string slugify(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (std::isalnum(static_cast<unsigned char>(c)))
            out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        else if (!out.empty() && out.back() != '-')
            out += '-';
    }
    while (!out.empty() && out.back() == '-') out.pop_back();
    return out.empty() ? "item" : out;
}

} // namespace gwave
