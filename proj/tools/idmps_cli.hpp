#pragma once

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "idmps/idmps.hpp"
#include "idmps/io.hpp"

namespace idmps::cli {

using nlohmann::json;

enum exit_code : int { ok = 0, malformed = 1, numerical = 2, verify_failed = 3 };

inline double rank_tol_from_env() {
  const char* v = std::getenv("IDMPS_RANK_TOL");
  if (!v || !*v) return default_rank_tol;
  char* end = nullptr;
  const double tol = std::strtod(v, &end);
  if (end == v || *end != '\0' || !(tol >= 0.0)) throw error(errc::parse_error, "IDMPS_RANK_TOL is not a number");
  return tol;
}

inline json spectra_json(const MatrixProductState& m, double tol) {
  json out = json::array();
  for (std::size_t cut = 1; cut < m.size(); ++cut) out.push_back(bond_spectrum(m, cut, tol).values);
  return out;
}

struct DecomposeArgs {
  std::string in, out, form = "left";
  std::optional<std::size_t> max_bond;
  std::optional<double> weight_tol;
};

inline int cmd_decompose(const DecomposeArgs& a, std::ostream& out) {
  const double tol = rank_tol_from_env();
  const auto t = io::read_tensor(a.in);
  const TruncationPolicy policy{a.max_bond, a.weight_tol};
  const auto [form, center] = io::parse_form(a.form);
  std::vector<double> errors;
  MatrixProductState m;
  switch (form) {
    case Form::left: m = from_dense_left_canonical(t, policy, tol, &errors); break;
    case Form::right: m = from_dense_right_canonical(t, policy, tol, &errors); break;
    case Form::mixed: m = from_dense_mixed_canonical(t, center, policy, tol, &errors); break;
    case Form::vidal: m = from_dense_vidal(t, policy, tol, &errors); break;
    case Form::unknown: throw error(errc::parse_error, "form must be left, right, mixed:<n> or vidal");
  }
  io::write_mps(a.out, m);
  json entropies = json::array();
  const auto spectra = spectra_json(m, tol);
  for (const auto& s : spectra) entropies.push_back(schmidt_entropy(s.get<std::vector<double>>()));
  out << json{{"form", to_string(m.form, m.center)},
              {"bond_dims", m.bond_dims()},
              {"bonds", spectra},
              {"entropies", entropies},
              {"truncation_errors", errors}}
             .dump()
      << '\n';
  return ok;
}

struct ReconstructArgs {
  std::string in, out, reference;
};

inline int cmd_reconstruct(const ReconstructArgs& a, std::ostream& out) {
  const auto m = io::read_mps(a.in);
  const auto t = to_dense(m);
  io::write_tensor(a.out, t);
  json report{{"shape", t.shape()}, {"norm", t.norm()}};
  if (!a.reference.empty()) {
    const auto ref = io::read_tensor(a.reference);
    report["roundtrip_residual"] = distance(t, ref) / ref.norm();
  }
  out << report.dump() << '\n';
  return ok;
}

struct VerifyArgs {
  std::string in;
  double tol = 1e-10;
  bool normalized = false;
};

inline json report_json(const NormalizationReport& r) {
  json residuals = json::array();
  for (const auto& v : r.residuals) residuals.push_back(v ? json(*v) : json(nullptr));
  json out{{"passed", r.passed},
           {"residuals", residuals},
           {"worst_site", r.worst_site},
           {"worst_residual", r.worst_residual}};
  if (r.boundary_site) {
    out["boundary_site"] = *r.boundary_site;
    out["boundary_norm2"] = r.boundary_norm2;
    out["boundary_checked"] = r.boundary_checked;
  }
  return out;
}

inline int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  const auto m = io::read_mps(a.in);
  json report{{"form", to_string(m.form, m.center)}};
  bool passed = false;
  switch (m.form) {
    case Form::left: {
      auto r = verify_left_normalized(m, a.tol, a.normalized);
      report["left"] = report_json(r);
      passed = r.passed;
      break;
    }
    case Form::right: {
      auto r = verify_right_normalized(m, a.tol, a.normalized);
      report["right"] = report_json(r);
      passed = r.passed;
      break;
    }
    case Form::mixed: {
      auto l = verify_left_normalized(m, a.tol, a.normalized);
      auto r = verify_right_normalized(m, a.tol, a.normalized);
      report["left"] = report_json(l);
      report["right"] = report_json(r);
      passed = l.passed && r.passed;
      if (a.normalized) {
        double w = 0.0;
        for (double v : m.bonds[m.center - 1].values) w += v * v;
        report["center_norm2"] = w;
        passed = passed && std::abs(w - 1.0) <= a.tol;
      }
      break;
    }
    case Form::vidal: {
      auto r = verify_vidal(m, a.tol);
      report["vidal"] = {{"passed", r.passed},
                         {"left_residuals", r.left_residuals},
                         {"right_residuals", r.right_residuals},
                         {"norm_residual", r.norm_residual}};
      passed = r.passed;
      break;
    }
    case Form::unknown: report["error"] = "MPS carries no canonical-form claim"; break;
  }
  report["passed"] = passed;
  out << report.dump() << '\n';
  return passed ? ok : verify_failed;
}

struct OscillatorArgs {
  OscillatorParams params;
  std::string config, out, csv;
};

inline OscillatorParams params_from_config(const std::string& path) {
  const auto j = io::read_json(path);
  OscillatorParams p;
  try {
    p.n = j.value("n", p.n);
    p.omega_tilde = j.value("omega_tilde", p.omega_tilde);
    p.theta = j.value("theta", p.theta);
    p.phi = j.value("phi", p.phi);
    p.varphi = j.value("varphi", p.varphi);
    p.phys_cutoff = j.value("phys_cutoff", p.phys_cutoff);
  } catch (const json::exception& e) {
    throw error(errc::parse_error, path + ": " + e.what());
  }
  return p;
}

inline void write_decay_csv(const std::string& path, const OscillatorMpsBundle& b) {
  std::ofstream csv(path);
  if (!csv) throw error(errc::parse_error, "cannot write " + path);
  csv << "which,a,b,index,magnitude\n" << std::setprecision(17);
  for (auto which : {Table::A1, Table::A2, Table::A3})
    for (const auto& row : element_decay_table(b, which)) {
      csv << to_string(row.which) << ',';
      if (row.a >= 0) csv << row.a;
      csv << ',';
      if (row.b >= 0) csv << row.b;
      csv << ',' << row.index << ',' << row.magnitude << '\n';
    }
}

inline int cmd_oscillator(const OscillatorArgs& a, std::ostream& out) {
  const auto bundle = build_bundle(a.params);
  io::write_mps(a.out, bundle.mps);
  if (!a.csv.empty()) write_decay_csv(a.csv, bundle);
  std::vector<double> al, ga;
  for (int k = 0; k <= a.params.n; ++k) {
    al.push_back(alpha(k, a.params));
    ga.push_back(gamma(k, a.params));
  }
  out << json{{"n", a.params.n},
              {"omega_tilde", a.params.omega_tilde},
              {"phys_cutoff", a.params.phys_cutoff},
              {"bond_dims", bundle.mps.bond_dims()},
              {"norm", to_dense(bundle.mps).norm()},
              {"alpha", al},
              {"gamma", ga}}
             .dump()
      << '\n';
  return ok;
}

/// Parses `args` (program name first) and runs one subcommand. Reports go to
/// `out` as a single JSON line; diagnostics go to `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dense states to matrix product states"};
  app.require_subcommand(1);

  DecomposeArgs dec;
  auto* decompose = app.add_subcommand("decompose", "Convert a tensor file into an MPS file");
  decompose->add_option("--in", dec.in, "Tensor file")->required();
  decompose->add_option("--out", dec.out, "MPS file to write")->required();
  decompose->add_option("--form", dec.form, "left, right, mixed:<n> or vidal")->capture_default_str();
  decompose->add_option("--max-bond", dec.max_bond, "Largest bond dimension kept");
  decompose->add_option("--weight-tol", dec.weight_tol, "Largest discarded weight per cut");

  ReconstructArgs rec;
  auto* reconstruct = app.add_subcommand("reconstruct", "Contract an MPS file back into a tensor file");
  reconstruct->add_option("--in", rec.in, "MPS file")->required();
  reconstruct->add_option("--out", rec.out, "Tensor file to write")->required();
  reconstruct->add_option("--reference", rec.reference, "Tensor to compare against");

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "Check the normalization conditions of an MPS file");
  verify->add_option("--in", ver.in, "MPS file")->required();
  verify->add_option("--tol", ver.tol, "Residual tolerance")->capture_default_str();
  verify->add_flag("--normalized", ver.normalized, "Also require unit norm");

  OscillatorArgs osc;
  auto* oscillator = app.add_subcommand("oscillator", "Build the coupled-oscillator eigenstate MPS");
  oscillator->add_option("--config", osc.config, "JSON file with n, omega_tilde, theta, phi, varphi, phys_cutoff");
  std::optional<int> n;
  std::optional<double> omega, theta, phi, varphi;
  std::optional<std::size_t> cutoff;
  oscillator->add_option("--n", n, "Quantum number of the excited mode");
  oscillator->add_option("--omega", omega, "Normal-mode frequency");
  oscillator->add_option("--theta", theta);
  oscillator->add_option("--phi", phi);
  oscillator->add_option("--varphi", varphi);
  oscillator->add_option("--cutoff", cutoff, "Basis functions per site");
  oscillator->add_option("--out", osc.out, "MPS file to write")->required();
  oscillator->add_option("--csv", osc.csv, "Element magnitude table to write");

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    std::ostringstream help;
    const int code = app.exit(e, help, err);
    if (code == 0) {
      err << help.str();
      return ok;
    }
    return malformed;
  }

  try {
    if (*decompose) return cmd_decompose(dec, out);
    if (*reconstruct) return cmd_reconstruct(rec, out);
    if (*verify) return cmd_verify(ver, out);
    if (!osc.config.empty()) osc.params = params_from_config(osc.config);
    if (n) osc.params.n = *n;
    if (omega) osc.params.omega_tilde = *omega;
    if (theta) osc.params.theta = *theta;
    if (phi) osc.params.phi = *phi;
    if (varphi) osc.params.varphi = *varphi;
    if (cutoff) osc.params.phys_cutoff = *cutoff;
    return cmd_oscillator(osc, out);
  } catch (const error& e) {
    err << e.what() << '\n';
    return e.numerical() ? numerical : malformed;
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return malformed;
  }
}

}  // namespace idmps::cli
