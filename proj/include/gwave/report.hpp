#ifndef GWAVE_REPORT_HPP
#define GWAVE_REPORT_HPP

#include "gwave/wavefront.hpp"

#include <json.hpp>

namespace gwave {

using ordered_json = nlohmann::ordered_json;

/// JSON-safe number (NaN / +-inf become null)
ordered_json json_number(double v);

ordered_json to_json(const ScaleVerdict& v);
ordered_json to_json(const SlopeFit& f);
ordered_json to_json(const RegularityReport& r);
ordered_json to_json(const WavefrontTable& t);
ordered_json to_json(const DerivativeBoundReport& d);
ordered_json to_json(const SingularSupportReport& s);
ordered_json to_json(const ConsistencyReport& c);
ordered_json to_json(const LocalEqualityReport& r);

/// decay curves, columns: m,eps,sup,fitted_exponent
std::string csv_decay_curves(const RegularityReport& r);

/// filesystem-safe slug for output names
std::string slugify(const std::string& s);

} // namespace gwave

#endif
