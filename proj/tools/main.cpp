// Command-line front end: density tabulation, closed-form moments and MGFs
// with their quadrature cross-checks, the verification suite, and coefficient
// tables. Batch only; CSV or JSON to stdout or a file.

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "qdist/moments.hpp"
#include "qdist/orthopoly.hpp"
#include "qdist/quadrature.hpp"
#include "qdist/verify.hpp"

namespace {

using namespace qdist;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// --output resolution: empty -> stdout; relative paths are placed under
// $QDIST_OUTPUT_DIR when it is set.
void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("QDIST_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
      p = std::filesystem::path(dir) / p;
    }
  }
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open output file '" + p.string() + "'");
  f << content;
  if (!f) throw std::runtime_error("write failed for '" + p.string() + "'");
}

struct FamilyOptions {
  std::string family;
  std::optional<double> q, a, b, y, rho;

  void attach(CLI::App* cmd) {
    cmd->add_option("--family", family, "distribution family: fh, fN, fQ, fCN")->required();
    cmd->add_option("--q", q, "deformation parameter q in (-1, 1]");
    cmd->add_option("--a", a, "fQ parameter a, |a| < 1");
    cmd->add_option("--b", b, "fQ parameter b, |b| < 1");
    cmd->add_option("--y", y, "fCN conditioning value y in the q-normal support");
    cmd->add_option("--rho", rho, "fCN correlation rho, |rho| < 1");
  }

  DistributionSpec build() const {
    auto fam = family_from_name(family);
    if (!fam) {
      throw std::invalid_argument("--family must be one of fh, fN, fQ, fCN (got '" + family +
                                  "')");
    }
    if (!q) throw std::invalid_argument("--q is required");
    auto need = [&](const std::optional<double>& v, const char* flag) {
      if (!v) throw std::invalid_argument("family " + family + " requires " + flag);
      return *v;
    };
    auto reject = [&](const std::optional<double>& v, const char* flag) {
      if (v) throw std::invalid_argument(std::string(flag) + " is not a parameter of family " +
                                         family);
    };
    switch (*fam) {
      case Family::fh:
        reject(a, "--a"), reject(b, "--b"), reject(y, "--y"), reject(rho, "--rho");
        return DistributionSpec::q_hermite_weight(*q);
      case Family::fN:
        reject(a, "--a"), reject(b, "--b"), reject(y, "--y"), reject(rho, "--rho");
        return DistributionSpec::q_normal(*q);
      case Family::fQ:
        reject(y, "--y"), reject(rho, "--rho");
        return DistributionSpec::al_salam_chihara_weight(need(a, "--a"), need(b, "--b"), *q);
      case Family::fCN:
        reject(a, "--a"), reject(b, "--b");
        return DistributionSpec::conditional_q_normal(need(y, "--y"), need(rho, "--rho"), *q);
    }
    throw std::logic_error("unreachable family");
  }
};

int run_density(const FamilyOptions& fam, double from, double to, int points,
                const std::string& out) {
  if (points < 1) throw std::invalid_argument("--points must be >= 1");
  if (points > 1 && !(from < to)) throw std::invalid_argument("--from must be below --to");
  const DistributionSpec spec = fam.build();
  std::string csv = "x,density\n";
  for (int i = 0; i < points; ++i) {
    const double x =
        (points == 1) ? from : from + (to - from) * static_cast<double>(i) / (points - 1);
    csv += fmt17(x) + "," + fmt17(density(spec, x)) + "\n";
  }
  write_output(out, csv);
  return kExitOk;
}

int run_moments(const FamilyOptions& fam, int max_order, const std::string& out) {
  if (max_order < 0) throw std::invalid_argument("--max-order must be >= 0");
  const DistributionSpec spec = fam.build();
  std::string csv = "n,closed_form,oracle,abs_diff\n";
  for (int n = 0; n <= max_order; ++n) {
    const double closed = moment(spec, n);
    const OracleReport r = moment_oracle(spec, n, std::max(1e-12, 1e-10 * std::fabs(closed)));
    if (!r.converged) {
      throw NonConvergenceError("moment oracle did not converge for n = " + std::to_string(n));
    }
    csv += std::to_string(n) + "," + fmt17(closed) + "," + fmt17(r.value) + "," +
           fmt17(std::fabs(closed - r.value)) + "\n";
  }
  write_output(out, csv);
  return kExitOk;
}

int run_mgf(const FamilyOptions& fam, double t, const std::string& out) {
  const DistributionSpec spec = fam.build();
  const MgfResult series = mgf(spec, t);
  if (!series.converged) {
    throw NonConvergenceError("mgf series did not converge (outer terms " +
                              std::to_string(series.outer_terms) + ", inner terms " +
                              std::to_string(series.inner_terms) + ")");
  }
  const OracleReport r = mgf_oracle(spec, t, std::max(1e-13, 1e-9 * std::fabs(series.value)));
  if (!r.converged) throw NonConvergenceError("mgf oracle quadrature did not converge");
  std::string json = "{\"series_value\": " + fmt17(series.value) +
                     ", \"oracle_value\": " + fmt17(r.value) +
                     ", \"outer_terms\": " + std::to_string(series.outer_terms) +
                     ", \"inner_terms\": " + std::to_string(series.inner_terms) + "}\n";
  write_output(out, json);
  return kExitOk;
}

int run_tabulate(const std::string& what, int n, double q, const std::string& out) {
  if (what != "c-coefficients") {
    throw std::invalid_argument("--what must be 'c-coefficients' (got '" + what + "')");
  }
  if (n < 1) throw std::invalid_argument("--n must be >= 1");
  std::string csv = "m,value\n";
  for (int m = 0; 2 * m <= n; ++m) {
    csv += std::to_string(m) + "," + fmt17(c_coefficient(m, n, q)) + "\n";
  }
  write_output(out, csv);
  return kExitOk;
}

int run_verify(const std::string& suite, double tol_scale, const std::string& out) {
  if (!(tol_scale > 0.0)) throw std::invalid_argument("--tol must be positive");
  const auto results = verify::run_suite(suite, tol_scale);
  std::string table;
  char line[256];
  std::snprintf(line, sizeof line, "%-15s %-58s %-13s %-10s %s\n", "suite", "check", "observed",
                "threshold", "result");
  table += line;
  int passed = 0;
  for (const auto& r : results) {
    std::snprintf(line, sizeof line, "%-15s %-58s %-13.3e %-10.1e %s\n", r.suite.c_str(),
                  r.name.c_str(), r.observed, r.threshold, r.passed ? "PASS" : "FAIL");
    table += line;
    passed += r.passed ? 1 : 0;
  }
  std::snprintf(line, sizeof line, "%d/%zu checks passed\n", passed, results.size());
  table += line;
  write_output(out, table);
  return passed == static_cast<int>(results.size()) ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"q-deformed probability distributions: densities, orthogonal polynomials,\n"
               "moments and Bessel-series MGFs, each cross-checked by an independent\n"
               "quadrature oracle."};
  app.require_subcommand(1);

  FamilyOptions density_fam, moments_fam, mgf_fam;
  double from = -1.0, to = 1.0, t = 1.0, tol_scale = 1.0, tab_q = 0.0;
  int points = 200, max_order = 10, tab_n = 1;
  std::string out_density, out_moments, out_mgf, out_tab, out_verify;
  std::string suite = "all", what = "c-coefficients";

  auto* density_cmd = app.add_subcommand("density", "tabulate a density as CSV (x,density)");
  density_fam.attach(density_cmd);
  density_cmd->add_option("--from", from, "first x")->required();
  density_cmd->add_option("--to", to, "last x")->required();
  density_cmd->add_option("--points", points, "number of evaluation points");
  density_cmd->add_option("--output", out_density, "output file (default stdout)");

  auto* moments_cmd = app.add_subcommand(
      "moments", "closed-form moments vs the quadrature oracle as CSV");
  moments_fam.attach(moments_cmd);
  moments_cmd->add_option("--max-order", max_order, "highest moment order");
  moments_cmd->add_option("--output", out_moments, "output file (default stdout)");

  auto* mgf_cmd =
      app.add_subcommand("mgf", "Bessel-series MGF vs the quadrature oracle as JSON");
  mgf_fam.attach(mgf_cmd);
  mgf_cmd->add_option("--t", t, "MGF argument")->required();
  mgf_cmd->add_option("--output", out_mgf, "output file (default stdout)");

  auto* verify_cmd = app.add_subcommand("verify", "run the verification suite");
  verify_cmd->add_option("--suite", suite,
                         "normalization|orthogonality|transfer|moments|mgf|limits|all");
  verify_cmd->add_option("--tol", tol_scale, "uniform tolerance scale factor");
  verify_cmd->add_option("--output", out_verify, "output file (default stdout)");

  auto* tab_cmd = app.add_subcommand("tabulate", "tabulate expansion coefficients as CSV");
  tab_cmd->add_option("--what", what, "table to produce: c-coefficients");
  tab_cmd->add_option("--n", tab_n, "degree n")->required();
  tab_cmd->add_option("--q", tab_q, "deformation parameter q")->required();
  tab_cmd->add_option("--output", out_tab, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (density_cmd->parsed()) return run_density(density_fam, from, to, points, out_density);
    if (moments_cmd->parsed()) return run_moments(moments_fam, max_order, out_moments);
    if (mgf_cmd->parsed()) return run_mgf(mgf_fam, t, out_mgf);
    if (verify_cmd->parsed()) return run_verify(suite, tol_scale, out_verify);
    if (tab_cmd->parsed()) return run_tabulate(what, tab_n, tab_q, out_tab);
  } catch (const NonConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::overflow_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
