#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dircan/canonical.hpp"
#include "dircan/dirac.hpp"
#include "dircan/herglotz.hpp"
#include "dircan/reflectionless.hpp"

namespace dircan {

// Malformed input specs (bad JSON shape, out-of-range values) are reported as
// std::invalid_argument so callers can distinguish them from numerical
// failures (dircan::error).

using nlohmann::json;

// {"shift": s, "atoms": [{"t": number | "inf", "w": w}, ...]}
json herglotz_to_json(const HerglotzRep& rep);
HerglotzRep herglotz_from_json(const json& j);

// {"gauge": "trace_zero"|"offdiag_zero", "repr": "constant"|"sampled"|
//  "extreme", "matrix": [[..],[..]], "grid": [...], "values": [[[..]],...],
//  "theta": t}
json potential_to_json(const DiracPotential& w,
                       const std::vector<double>& sample_grid = {});
DiracPotential potential_from_json(const json& j);

// {"normalization": "det_one"|"trace_one", "repr": "constant"|"sampled"|
//  "degenerate", "matrix": [[..]], "grid": [...], "H_values": [...],
//  "alpha": a}
json canonical_to_json(const CanonicalSystem& h);
CanonicalSystem canonical_from_json(const json& j);

// {"type": "herglotz", ...rep...} | {"type": "combination",
//  "atoms": [{"theta": t, "w": w}]} | {"type": "potential", ...potential...}
FFunction ffunction_from_json(const json& j, double m_tol = 1e-9);

json load_json_file(const std::string& path);

// All floating-point output uses 17 significant digits.
std::string format_g17(double v);

// CSV with a versioned header comment line.
class csv_writer {
 public:
  csv_writer(const std::string& path, const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  void raw_row(const std::vector<std::string>& cells);

 private:
  std::string path_;
  std::string buffer_;
  std::size_t n_cols_;
  void flush();
  friend struct csv_writer_finalizer;
 public:
  ~csv_writer();
};

}  // namespace dircan
