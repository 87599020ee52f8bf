#include "dircan/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace dircan {

namespace {

[[noreturn]] void bad_spec(const std::string& msg) {
  throw std::invalid_argument("spec: " + msg);
}

Mat2 mat_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || j[0].size() != 2 || j[1].size() != 2)
    bad_spec("matrix must be a 2x2 array");
  return Mat2{j[0][0].get<double>(), j[0][1].get<double>(),
              j[1][0].get<double>(), j[1][1].get<double>()};
}

json mat_to_json(const Mat2& m) {
  return json::array({json::array({m.a, m.b}), json::array({m.c, m.d})});
}

}  // namespace

json herglotz_to_json(const HerglotzRep& rep) {
  json atoms = json::array();
  for (const auto& a : rep.atoms()) {
    json ja;
    if (a.t.is_infinity())
      ja["t"] = "inf";
    else
      ja["t"] = a.t.value().real();
    ja["w"] = a.w;
    atoms.push_back(ja);
  }
  return json{{"shift", rep.shift()}, {"atoms", atoms}};
}

HerglotzRep herglotz_from_json(const json& j) {
  try {
    const double shift = j.value("shift", 0.0);
    std::vector<HerglotzAtom> atoms;
    for (const auto& ja : j.at("atoms")) {
      RiemannPoint t = ja.at("t").is_string()
                           ? RiemannPoint::infinity()
                           : RiemannPoint(ja.at("t").get<double>());
      if (ja.at("t").is_string() && ja.at("t").get<std::string>() != "inf")
        bad_spec("atom location must be a number or \"inf\"");
      atoms.push_back({t, ja.at("w").get<double>()});
    }
    return HerglotzRep(shift, std::move(atoms));
  } catch (const json::exception& e) {
    bad_spec(std::string("herglotz: ") + e.what());
  } catch (const dircan::error& e) {
    bad_spec(std::string("herglotz: ") + e.what());
  }
}

json potential_to_json(const DiracPotential& w,
                       const std::vector<double>& sample_grid) {
  json j;
  j["gauge"] = w.gauge() == gauge_tag::trace_zero    ? "trace_zero"
               : w.gauge() == gauge_tag::offdiag_zero ? "offdiag_zero"
                                                      : "general";
  if (w.repr() == repr_tag::constant && sample_grid.empty()) {
    j["repr"] = "constant";
    j["matrix"] = mat_to_json(w(0.0));
    return j;
  }
  if (sample_grid.empty())
    bad_spec("potential_to_json: non-constant potential needs a sample grid");
  j["repr"] = "sampled";
  j["grid"] = sample_grid;
  json vals = json::array();
  for (double x : sample_grid) vals.push_back(mat_to_json(w(x)));
  j["values"] = vals;
  return j;
}

DiracPotential potential_from_json(const json& j) {
  try {
    const std::string repr = j.at("repr").get<std::string>();
    if (repr == "constant") return DiracPotential::constant(mat_from_json(j.at("matrix")));
    if (repr == "extreme") return extreme_potential(j.at("theta").get<double>());
    if (repr == "sampled") {
      std::vector<double> grid = j.at("grid").get<std::vector<double>>();
      std::vector<Mat2> vals;
      for (const auto& jm : j.at("values")) vals.push_back(mat_from_json(jm));
      gauge_tag g = gauge_tag::general;
      if (j.contains("gauge")) {
        const std::string gs = j.at("gauge").get<std::string>();
        if (gs == "trace_zero") g = gauge_tag::trace_zero;
        else if (gs == "offdiag_zero") g = gauge_tag::offdiag_zero;
        else if (gs != "general") bad_spec("unknown gauge tag " + gs);
      }
      return DiracPotential::sampled(std::move(grid), std::move(vals), g);
    }
    bad_spec("unknown potential repr " + repr);
  } catch (const json::exception& e) {
    bad_spec(std::string("potential: ") + e.what());
  } catch (const dircan::error& e) {
    bad_spec(std::string("potential: ") + e.what());
  }
}

json canonical_to_json(const CanonicalSystem& h) {
  json j;
  j["normalization"] =
      h.normalization() == norm_tag::det_one ? "det_one" : "trace_one";
  if (h.is_degenerate()) {
    j["repr"] = "degenerate";
    j["alpha"] = h.degenerate_angle();
    return j;
  }
  if (h.is_constant()) {
    j["repr"] = "constant";
    j["matrix"] = mat_to_json(h.H(0.0));
    return j;
  }
  j["repr"] = "sampled";
  j["grid"] = h.grid();
  json vals = json::array();
  for (const auto& m : h.values()) vals.push_back(mat_to_json(m));
  j["H_values"] = vals;
  return j;
}

CanonicalSystem canonical_from_json(const json& j) {
  try {
    const std::string repr = j.at("repr").get<std::string>();
    norm_tag norm = norm_tag::det_one;
    if (j.contains("normalization")) {
      const std::string ns = j.at("normalization").get<std::string>();
      if (ns == "trace_one") norm = norm_tag::trace_one;
      else if (ns != "det_one") bad_spec("unknown normalization " + ns);
    } else if (repr != "degenerate") {
      bad_spec("canonical spec needs a normalization tag");
    }
    if (repr == "degenerate")
      return CanonicalSystem::degenerate(j.at("alpha").get<double>());
    if (repr == "constant")
      return CanonicalSystem::constant(mat_from_json(j.at("matrix")), norm);
    if (repr == "sampled") {
      std::vector<double> grid = j.at("grid").get<std::vector<double>>();
      std::vector<Mat2> vals;
      for (const auto& jm : j.at("H_values")) vals.push_back(mat_from_json(jm));
      return CanonicalSystem::sampled(std::move(grid), std::move(vals), norm);
    }
    bad_spec("unknown canonical repr " + repr);
  } catch (const json::exception& e) {
    bad_spec(std::string("canonical: ") + e.what());
  } catch (const dircan::error& e) {
    bad_spec(std::string("canonical: ") + e.what());
  }
}

FFunction ffunction_from_json(const json& j, double m_tol) {
  try {
    const std::string type = j.at("type").get<std::string>();
    if (type == "herglotz") return FFunction::from_rep(herglotz_from_json(j));
    if (type == "combination") {
      std::vector<std::pair<double, double>> atoms;
      for (const auto& ja : j.at("atoms"))
        atoms.emplace_back(ja.at("theta").get<double>(),
                           ja.at("w").get<double>());
      return convex_combination(atoms);
    }
    if (type == "potential")
      return FFunction::from_potential(potential_from_json(j), m_tol);
    bad_spec("unknown F type " + type);
  } catch (const json::exception& e) {
    bad_spec(std::string("ffunction: ") + e.what());
  } catch (const bad_weights& e) {
    bad_spec(std::string("ffunction: ") + e.what());
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad_spec("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    bad_spec(path + ": " + e.what());
  }
  return j;
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

csv_writer::csv_writer(const std::string& path,
                       const std::vector<std::string>& columns)
    : path_(path), n_cols_(columns.size()) {
  buffer_ = "# dircan-csv v1\n";
  for (std::size_t k = 0; k < columns.size(); ++k) {
    buffer_ += columns[k];
    buffer_ += k + 1 < columns.size() ? ',' : '\n';
  }
}

void csv_writer::row(const std::vector<double>& values) {
  if (values.size() != n_cols_) throw error("csv_writer: column mismatch");
  for (std::size_t k = 0; k < values.size(); ++k) {
    buffer_ += format_g17(values[k]);
    buffer_ += k + 1 < values.size() ? ',' : '\n';
  }
}

void csv_writer::raw_row(const std::vector<std::string>& cells) {
  if (cells.size() != n_cols_) throw error("csv_writer: column mismatch");
  for (std::size_t k = 0; k < cells.size(); ++k) {
    buffer_ += cells[k];
    buffer_ += k + 1 < cells.size() ? ',' : '\n';
  }
}

void csv_writer::flush() {
  std::ofstream out(path_);
  if (!out) throw error("csv_writer: cannot open " + path_);
  out << buffer_;
}

csv_writer::~csv_writer() {
  try {
    flush();
  } catch (...) {
  }
}

}  // namespace dircan
