#pragma once

// JSON and CSV serialisation. Complex matrices are {"dim": n, "re": [...],
// "im": [...]} with entries stored row-major.

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "ergo/drives.hpp"
#include "ergo/ergotropy.hpp"

namespace ergo {

using json = nlohmann::json;

/// InvalidInput on a malformed object, DimMismatch if the arrays are not dim^2 long.
CMatrix matrix_from_json(const json& j);
json matrix_to_json(const CMatrix& m);

json to_json(const ErgotropyReport& r);
json to_json(const CounterexampleB& c);
json to_json(const VerificationResult& v);
/// chi, thetas, phases, w, w_min and the final/target states; V samples go to CSV.
json to_json(const DriveSynthesis& s);

/// "%.17g"; non-finite values print as nan / inf / -inf.
std::string format_real(double x);

/// Header t,re_00,im_00,re_01,... then one row per grid point, LF endings.
void write_v_csv(std::ostream& os, const DriveSynthesis& s);

json error_json(const Error& e);

}  // namespace ergo
