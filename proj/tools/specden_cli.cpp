#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>

#include "CLI11.hpp"
#include "json.hpp"
#include "specden/edge.hpp"
#include "specden/fixtures.hpp"
#include "specden/oracle.hpp"
#include "specden/resolvent.hpp"

using json = nlohmann::ordered_json;
using namespace specden;

namespace {

struct RunConfig {
  std::string family, beta, n = "1", a = "0", b = "0", g;
  std::string alpha1 = "0", delta1 = "0", alpha2 = "0", delta2 = "0";
  int kmax = 10, kmin = 0, lmax = -1, J = 16;
  bool symbolic = false;
  std::uint64_t samples = 100000, seed = 1;
  int workers = 1;
  double xmin = -6, xmax = 3, step = 0.01, tol = 1e-10;
  double sigmas = 4;
  std::vector<std::string> suite, check;
  int trials = 3;
  std::string table;
  std::string out, format;  // format defaults to csv for edge, json otherwise
};

// Exit status for a report that ran but found violations.
struct Failed {
  std::string message;
};

const std::set<std::string> kValidation = {"InvalidArgument", "UnsupportedBeta", "UnsupportedFamily", "UnsupportedParameter",
                                           "UnsupportedN",    "NoHardEdge",      "DomainExceeded",    "ZeroDenominator",
                                           "ParseError",      "DivergentMoment", "RangeTooSmall",  "SizeLimit"};

std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

Rational q(const std::string& flag, const std::string& s) {
  try {
    return parse_rational(s);
  } catch (const Error& e) {
    fail("InvalidArgument", "--" + flag + ": " + e.what());
  }
}

EnsembleSpec<Rational> ensemble(const RunConfig& c) {
  EnsembleSpec<Rational> s;
  s.family = parse_family(c.family);
  s.beta = q("beta", c.beta);
  s.N = q("n", c.n);
  s.a = q("a", c.a);
  s.b = q("b", c.b);
  if (!c.g.empty()) s.g = q("g", c.g);
  if (s.beta <= 0) fail("InvalidArgument", "--beta must be positive");
  if (s.N <= 0) fail("InvalidArgument", "--n must be positive");
  return s;
}

json spec_json(const EnsembleSpec<Rational>& s) {
  json j{{"family", family_name(s.family)}, {"beta", to_string(s.beta)}, {"N", to_string(s.N)}};
  if (s.family != Family::Gaussian) j["a"] = to_string(s.a);
  if (s.family == Family::Jacobi) j["b"] = to_string(s.b);
  if (s.g) j["g"] = to_string(*s.g);
  return j;
}

void emit(const RunConfig& c, const json& j, const std::string& csv) {
  std::string text = c.format == "csv" ? csv : j.dump(2) + "\n";
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) fail("IOError", "cannot write '" + c.out + "'");
  f << text;
}

void add_spec_options(CLI::App* sub, RunConfig& c, bool need_n = true) {
  sub->add_option("--family", c.family, "gaussian | laguerre | jacobi")->required();
  sub->add_option("--beta", c.beta, "Dyson index, rational")->required();
  if (need_n) sub->add_option("--n", c.n, "matrix size N, rational")->capture_default_str();
  sub->add_option("--a", c.a, "Laguerre/Jacobi exponent a")->capture_default_str();
  sub->add_option("--b", c.b, "Jacobi exponent b")->capture_default_str();
  sub->add_option("--g", c.g, "Gaussian coupling g (weight exp(-N kappa x^2/(2g)))");
}

void add_scaled_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--alpha1", c.alpha1, "a = alpha1 N + delta1")->capture_default_str();
  sub->add_option("--delta1", c.delta1)->capture_default_str();
  sub->add_option("--alpha2", c.alpha2, "b = alpha2 N + delta2")->capture_default_str();
  sub->add_option("--delta2", c.delta2)->capture_default_str();
}

void add_output_options(CLI::App* sub, RunConfig& c, const std::string& def = "json") {
  sub->add_option("--out", c.out, "output file (default stdout)");
  sub->add_option("--format", c.format, "json | csv")->check(CLI::IsMember({"json", "csv"}))->default_str(def);
}

void run_moments(const RunConfig& c) {
  if (c.kmax < 0 || c.kmin > 0) fail("InvalidArgument", "need kmin <= 0 <= kmax");
  json j{{"command", "moments"}};
  std::string csv = "k,value\n";
  json rows = json::array();
  if (c.symbolic) {
    Family f = parse_family(c.family);
    Rational beta = q("beta", c.beta);
    std::optional<Rational> g;
    if (!c.g.empty()) g = q("g", c.g);
    Scaled a{q("alpha1", c.alpha1), q("delta1", c.delta1)}, b{q("alpha2", c.alpha2), q("delta2", c.delta2)};
    auto t = moments_symbolic(f, beta, a, b, c.kmax, g);
    j["family"] = family_name(f);
    j["beta"] = to_string(beta);
    j["a"] = to_string(a.alpha) + "*N+" + to_string(a.delta);
    j["b"] = to_string(b.alpha) + "*N+" + to_string(b.delta);
    j["provenance"] = t.provenance;
    for (const auto& [k, v] : t.values) {
      rows.push_back({{"k", k}, {"value", to_string(v)}});
      csv += std::to_string(k) + ",\"" + to_string(v) + "\"\n";
    }
  } else {
    auto s = ensemble(c);
    auto t = moments_exact(s, c.kmax);
    if (c.kmin < 0) {
      auto neg = moments_negative(s, c.kmin);
      for (const auto& [k, v] : neg.values)
        if (k < 0) t.values[k] = v;
    }
    j["spec"] = spec_json(s);
    j["provenance"] = t.provenance;
    for (const auto& [k, v] : t.values) {
      if (k > c.kmax) continue;
      rows.push_back({{"k", k}, {"value", to_string(v)}});
      csv += std::to_string(k) + "," + to_string(v) + "\n";
    }
  }
  j["moments"] = rows;
  emit(c, j, csv);
}

void run_coeffs(const RunConfig& c) {
  if (c.kmax < 0 || c.lmax < 0) fail("InvalidArgument", "coeffs needs --kmax >= 0 and --lmax >= 0");
  Family f = parse_family(c.family);
  Rational beta = q("beta", c.beta);
  Scaled a{q("alpha1", c.alpha1), q("delta1", c.delta1)}, b{q("alpha2", c.alpha2), q("delta2", c.delta2)};
  auto t = coeff_table(f, beta, a, b, c.kmax, c.lmax);
  json j{{"command", "coeffs"},
         {"family", family_name(f)},
         {"beta", to_string(beta)},
         {"alpha1", to_string(a.alpha)},
         {"delta1", to_string(a.delta)},
         {"alpha2", to_string(b.alpha)},
         {"delta2", to_string(b.delta)},
         {"kmax", c.kmax},
         {"lmax", c.lmax}};
  json rows = json::array();
  std::string csv = "k,l,value\n";
  for (const auto& [kl, v] : t.entries) {
    rows.push_back({{"k", kl.first}, {"l", kl.second}, {"value", to_string(v)}});
    csv += std::to_string(kl.first) + "," + std::to_string(kl.second) + "," + to_string(v) + "\n";
  }
  j["entries"] = rows;
  size_t bad = 0;
  if (!c.check.empty()) {
    json checks = json::array();
    for (const auto& id : c.check) {
      auto rep = verify_printed_recursion(id, t);
      json v = json::array();
      for (const auto& x : rep.violations)
        v.push_back({{"k", x.k}, {"l", x.l}, {"lhs", to_string(x.lhs)}, {"rhs", to_string(x.rhs)}});
      bad += rep.violations.size();
      checks.push_back({{"fixture", id}, {"checked", rep.checked}, {"violations", v}});
    }
    j["checks"] = checks;
  }
  emit(c, j, csv);
  if (bad) throw Failed{std::to_string(bad) + " recursion violations"};
}

json levels_json(const ExpansionStack& st, std::string& csv) {
  json lv = json::array();
  csv = "l,j,value\n";
  for (size_t l = 0; l < st.levels.size(); ++l) {
    json coeffs = json::array();
    for (int jj = 0; jj < st.J; ++jj) {
      auto v = to_string(st.levels[l].coeff(-jj - 1));
      coeffs.push_back(v);
      csv += std::to_string(l) + "," + std::to_string(jj) + ",\"" + v + "\"\n";
    }
    lv.push_back(coeffs);
  }
  return lv;
}

void run_resolvent(const RunConfig& c) {
  if (c.J < 1) fail("InvalidArgument", "--J must be positive");
  if (c.lmax >= 0) {
    Family f = parse_family(c.family);
    Rational beta = q("beta", c.beta);
    auto st = expansion_coefficients(f, beta, q("alpha1", c.alpha1), q("alpha2", c.alpha2), c.lmax, c.J);
    std::string csv;
    json j{{"command", "resolvent"},
           {"mode", "levels"},
           {"family", family_name(f)},
           {"beta", to_string(beta)},
           {"alpha1", to_string(st.alpha1)},
           {"alpha2", to_string(st.alpha2)},
           {"J", c.J},
           {"scaling",
            {{"kappa", to_string(st.scaling.kappa)},
             {"nu", st.scaling.nu},
             {"mu", st.scaling.mu},
             {"sigma", to_string(st.scaling.sigma)},
             {"c", to_string(st.scaling.c)},
             {"eta", to_string(st.scaling.eta)},
             {"parameter", st.scaling.parameter}}},
           {"consistency_checked", st.consistency_checked}};
    j["levels"] = levels_json(st, csv);
    emit(c, j, csv);
    return;
  }
  auto s = ensemble(c);
  auto w = resolvent_series(s, c.J);
  auto rep = check_resolvent_ode(s, c.J);
  json coeffs = json::array();
  std::string csv = "j,value\n";
  for (int jj = 0; jj < c.J; ++jj) {
    auto v = to_string(w.coeff(-jj - 1));
    coeffs.push_back(v);
    csv += std::to_string(jj) + "," + v + "\n";
  }
  json j{{"command", "resolvent"}, {"mode", "series"}, {"spec", spec_json(s)}, {"J", c.J}, {"coefficients", coeffs}};
  j["ode_check"] = {{"polynomial_part", to_string(rep.polynomial_part)},
                    {"expected", to_string(rep.expected)},
                    {"checked_negative", rep.checked_negative},
                    {"nonzero_negative", rep.nonzero_negative},
                    {"ok", rep.ok()}};
  emit(c, j, csv);
  if (!rep.ok()) throw Failed{"resolvent does not satisfy the catalog equation"};
}

void run_derive(const RunConfig& c) {
  auto s = ensemble(c);
  auto D = catalog_density_op(s);
  auto R = catalog_resolvent_rhs(s);
  auto rec = moment_recurrence_from_ode(D);
  json coeffs = json::array();
  std::string csv = "derivative,power,value\n";
  for (int i = 0; i <= D.order(); ++i) {
    json row = json::array();
    const auto& p = D.coeff(i);
    for (int e = 0; e <= p.degree(); ++e) {
      row.push_back(to_string(p[e]));
      if (p[e] != 0) csv += std::to_string(i) + "," + std::to_string(e) + "," + to_string(p[e]) + "\n";
    }
    coeffs.push_back(row);
  }
  json rc = json::array();
  for (const auto& p : rec.c) rc.push_back(to_string(p, "k"));
  json j{{"command", "derive-ode"},
         {"spec", spec_json(s)},
         {"operator", to_string(D)},
         {"order", D.order()},
         {"degree_shift", D.degree_shift()},
         {"coefficients", coeffs},
         {"resolvent_rhs", to_string(R)},
         {"recurrence", {{"step", rec.step}, {"lead", rec.lead}, {"coefficients", rc}}}};
  emit(c, j, csv);
}

void run_verify_fixtures(const RunConfig& c) {
  if (c.trials < 1) fail("InvalidArgument", "--trials must be positive");
  auto ids = c.suite.empty() ? fixture_ids() : c.suite;
  json rows = json::array();
  std::string csv = "fixture,target,checked,violations\n";
  size_t bad = 0;
  for (const auto& id : ids)
    for (const auto& r : run_fixture(id, c.trials, c.seed)) {
      json row{{"fixture", r.id}, {"target", r.target}, {"checked", r.checked}, {"violations", r.violations}};
      if (r.factor) row["factor"] = to_string(*r.factor);
      rows.push_back(row);
      csv += r.id + ",\"" + r.target + "\"," + std::to_string(r.checked) + "," + std::to_string(r.violations.size()) + "\n";
      bad += r.violations.size();
    }
  json j{{"command", "verify fixtures"}, {"trials", c.trials}, {"seed", c.seed}, {"results", rows}, {"violations", bad}};
  emit(c, j, csv);
  if (bad) throw Failed{std::to_string(bad) + " fixture violations"};
}

void run_verify_ode(const RunConfig& c) {
  auto s = ensemble(c);
  auto rep = check_resolvent_ode(s, c.J);
  json j{{"command", "verify ode"},
         {"spec", spec_json(s)},
         {"J", c.J},
         {"polynomial_part", to_string(rep.polynomial_part)},
         {"expected", to_string(rep.expected)},
         {"checked_negative", rep.checked_negative},
         {"nonzero_negative", rep.nonzero_negative}};
  bool ok = rep.ok();
  std::string csv = "check,ok\nresolvent," + std::string(rep.ok() ? "1" : "0") + "\n";
  if (s.beta == 2 && s.N.get_den() == 1 && s.g == std::nullopt) {
    auto r = cd_annihilation(s);
    bool zero = r.Q.is_zero_poly();
    j["cd_annihilation_zero"] = zero;
    csv += "cd_annihilation," + std::string(zero ? "1" : "0") + "\n";
    ok = ok && zero;
  }
  j["ok"] = ok;
  emit(c, j, csv);
  if (!ok) throw Failed{"ODE verification failed"};
}

MomentTable<Rational> read_moment_table(const std::string& path, EnsembleSpec<Rational>& s) {
  std::ifstream f(path);
  if (!f) fail("InvalidArgument", "cannot read '" + path + "'");
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    fail("InvalidArgument", std::string("malformed table: ") + e.what());
  }
  if (!j.contains("spec") || !j.contains("moments")) fail("InvalidArgument", "table lacks spec or moments");
  const auto& sp = j["spec"];
  s.family = parse_family(sp.at("family").get<std::string>());
  s.beta = parse_rational(sp.at("beta").get<std::string>());
  s.N = parse_rational(sp.at("N").get<std::string>());
  if (sp.contains("a")) s.a = parse_rational(sp["a"].get<std::string>());
  if (sp.contains("b")) s.b = parse_rational(sp["b"].get<std::string>());
  if (sp.contains("g")) s.g = parse_rational(sp["g"].get<std::string>());
  MomentTable<Rational> t;
  t.family = s.family;
  t.beta = s.beta;
  for (const auto& row : j["moments"]) t.values[row.at("k").get<int>()] = parse_rational(row.at("value").get<std::string>());
  return t;
}

void run_verify_oracle(const RunConfig& c) {
  json j{{"command", "verify oracle"}};
  std::string csv = "k,method,exact,oracle,agree\n";
  bool ok = true;
  if (!c.table.empty()) {
    EnsembleSpec<Rational> s;
    auto t = read_moment_table(c.table, s);
    int top = t.values.empty() ? 0 : t.values.rbegin()->first;
    int bottom = t.values.empty() ? 0 : t.values.begin()->first;
    auto ref = moments_exact(s, std::max(top, 0));
    if (bottom < 0) {
      auto neg = moments_negative(s, bottom);
      for (const auto& [k, v] : neg.values)
        if (k < 0) ref.values[k] = v;
    }
    json rows = json::array();
    for (const auto& [k, v] : t.values) {
      bool eq = ref.at(k) == v;
      ok = ok && eq;
      rows.push_back({{"k", k}, {"table", to_string(v)}, {"recomputed", to_string(ref.at(k))}, {"agree", eq}});
      csv += std::to_string(k) + ",table," + to_string(ref.at(k)) + "," + to_string(v) + "," + (eq ? "1" : "0") + "\n";
    }
    j["spec"] = spec_json(s);
    j["method"] = "table";
    j["rows"] = rows;
  } else {
    auto s = ensemble(c);
    auto ex = moments_exact(s, c.kmax);
    j["spec"] = spec_json(s);
    json rows = json::array();
    if (s.beta.get_den() == 1 && s.beta.get_num() % 2 == 0) {
      auto bf = moments_bruteforce(s, c.kmax);
      j["method"] = "bruteforce";
      for (int k = 0; k <= c.kmax; ++k) {
        bool eq = bf.at(k) == ex.at(k);
        ok = ok && eq;
        rows.push_back({{"k", k}, {"exact", to_string(ex.at(k))}, {"oracle", to_string(bf.at(k))}, {"agree", eq}});
        csv += std::to_string(k) + ",bruteforce," + to_string(ex.at(k)) + "," + to_string(bf.at(k)) + "," + (eq ? "1" : "0") + "\n";
      }
    } else {
      auto qd = moments_quadrature(s, c.kmax);
      j["method"] = "quadrature";
      j["tolerance"] = c.tol;
      for (int k = 0; k <= c.kmax; ++k) {
        double e = to_double(ex.at(k)), v = qd[static_cast<size_t>(k)];
        bool eq = std::abs(v - e) <= c.tol * std::max(1.0, std::abs(e));
        ok = ok && eq;
        rows.push_back({{"k", k}, {"exact", to_string(ex.at(k))}, {"oracle", num(v)}, {"agree", eq}});
        csv += std::to_string(k) + ",quadrature," + to_string(ex.at(k)) + "," + fmt17(v) + "," + (eq ? "1" : "0") + "\n";
      }
    }
    j["rows"] = rows;
  }
  j["ok"] = ok;
  emit(c, j, csv);
  if (!ok) throw Failed{"oracle disagreement"};
}

void run_verify_mc(const RunConfig& c) {
  auto s = ensemble(c);
  auto est = mc_moments(s, c.kmax, c.samples, c.seed, c.workers);
  auto ex = moments_exact(s, c.kmax);
  json rows = json::array();
  std::string csv = "k,exact,mean,stderr,z\n";
  bool ok = true;
  for (int k = 0; k <= c.kmax; ++k) {
    double e = to_double(ex.at(k)), m = est.mean.at(k), se = est.stderr_.at(k);
    double z = se > 0 ? (m - e) / se : (m == e ? 0.0 : INFINITY);
    bool pass = std::abs(z) <= c.sigmas;
    ok = ok && pass;
    rows.push_back({{"k", k}, {"exact", to_string(ex.at(k))}, {"mean", num(m)}, {"stderr", num(se)}, {"z", num(z)}, {"pass", pass}});
    csv += std::to_string(k) + "," + to_string(ex.at(k)) + "," + fmt17(m) + "," + fmt17(se) + "," + fmt17(z) + "\n";
  }
  json j{{"command", "verify mc"}, {"spec", spec_json(s)}, {"samples", c.samples}, {"seed", c.seed},
         {"workers", c.workers}, {"sigmas", c.sigmas}, {"rows", rows}, {"ok", ok}};
  emit(c, j, csv);
  if (!ok) throw Failed{"Monte Carlo moments outside the tolerance band"};
}

void run_edge(const RunConfig& c, bool hard) {
  Rational beta = q("beta", c.beta);
  EdgeOptions opt;
  opt.step = c.step;
  opt.tol = c.tol;
  EdgeSolution sol = hard ? solve_hard_edge(beta, q("a", c.a), c.xmax, opt) : solve_soft_edge(beta, c.xmin, c.xmax, opt);
  json j{{"command", hard ? "edge hard" : "edge soft"}, {"beta", to_string(beta)}};
  if (hard) j["a"] = to_string(sol.a);
  j["normalization"] = sol.normalization;
  json w = json::array();
  for (double v : sol.mode_weights) w.push_back(num(v));
  j["mode_weights"] = w;
  j["ode_residual"] = num(sol.ode_residual);
  j["oracle_deviation"] = sol.oracle_deviation ? num(*sol.oracle_deviation) : json(nullptr);
  if (!hard) j["seed_x"] = num(sol.seed_x);
  json xs = json::array(), rs = json::array(), res = json::array();
  std::string csv = "x,rho,residual\n";
  for (size_t i = 0; i < sol.grid.size(); ++i) {
    xs.push_back(num(sol.grid[i]));
    rs.push_back(num(sol.values[i]));
    res.push_back(num(sol.residuals[i]));
    csv += fmt17(sol.grid[i]) + "," + fmt17(sol.values[i]) + "," + (std::isnan(sol.residuals[i]) ? "" : fmt17(sol.residuals[i])) + "\n";
  }
  j["x"] = xs;
  j["rho"] = rs;
  j["residual"] = res;
  emit(c, j, csv);
}

void run_mc(const RunConfig& c) {
  auto s = ensemble(c);
  auto est = mc_moments(s, c.kmax, c.samples, c.seed, c.workers);
  json rows = json::array();
  std::string csv = "k,mean,stderr\n";
  for (int k = 0; k <= c.kmax; ++k) {
    rows.push_back({{"k", k}, {"mean", num(est.mean.at(k))}, {"stderr", num(est.stderr_.at(k))}});
    csv += std::to_string(k) + "," + fmt17(est.mean.at(k)) + "," + fmt17(est.stderr_.at(k)) + "\n";
  }
  json j{{"command", "mc"}, {"spec", spec_json(s)}, {"samples", c.samples}, {"seed", c.seed}, {"workers", c.workers}, {"moments", rows}};
  emit(c, j, csv);
}

void report(const std::string& code, const std::string& message) {
  std::cerr << json{{"code", code}, {"message", message}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig c;
  CLI::App app{"Exact moments, resolvents and edge densities of classical beta ensembles", "specden"};
  app.require_subcommand(1);

  auto* moments = app.add_subcommand("moments", "exact spectral moments");
  add_spec_options(moments, c);
  moments->add_option("--kmax", c.kmax)->capture_default_str();
  moments->add_option("--kmin", c.kmin, "negative moments down to kmin (Laguerre/Jacobi)")->capture_default_str();
  moments->add_flag("--symbolic", c.symbolic, "moments as rational functions of N, a and b from --alpha*/--delta*");
  add_scaled_options(moments, c);
  add_output_options(moments, c);

  auto* coeffs = app.add_subcommand("coeffs", "1/N expansion coefficients M(k,l)");
  coeffs->add_option("--family", c.family)->required();
  coeffs->add_option("--beta", c.beta)->required();
  add_scaled_options(coeffs, c);
  coeffs->add_option("--kmax", c.kmax)->capture_default_str();
  coeffs->add_option("--lmax", c.lmax)->required();
  coeffs->add_option("--check", c.check, "printed recursion ids to verify on the table")->delimiter(',');
  add_output_options(coeffs, c);

  auto* resolvent = app.add_subcommand("resolvent", "resolvent series, or topological levels with --lmax");
  add_spec_options(resolvent, c);
  add_scaled_options(resolvent, c);
  resolvent->add_option("--J", c.J, "number of 1/x coefficients")->capture_default_str();
  resolvent->add_option("--lmax", c.lmax, "levels W^0..W^lmax of the scaled resolvent");
  add_output_options(resolvent, c);

  auto* derive = app.add_subcommand("derive-ode", "catalog operator, resolvent right-hand side and moment recurrence");
  add_spec_options(derive, c);
  add_output_options(derive, c);

  auto* verify = app.add_subcommand("verify", "verification reports");
  verify->require_subcommand(1);
  auto* vfix = verify->add_subcommand("fixtures", "printed recurrences and recursions");
  vfix->add_option("--suite", c.suite, "comma-separated fixture ids (default all)")->delimiter(',');
  vfix->add_option("--trials", c.trials)->capture_default_str();
  vfix->add_option("--seed", c.seed)->envname("SPECDEN_SEED")->capture_default_str();
  add_output_options(vfix, c);
  auto* vode = verify->add_subcommand("ode", "resolvent equation and beta = 2 annihilation");
  add_spec_options(vode, c);
  vode->add_option("--J", c.J)->capture_default_str();
  add_output_options(vode, c);
  auto* vor = verify->add_subcommand("oracle", "exact moments against brute force or quadrature, or a stored table");
  vor->add_option("--family", c.family);
  vor->add_option("--beta", c.beta);
  vor->add_option("--n", c.n)->capture_default_str();
  vor->add_option("--a", c.a)->capture_default_str();
  vor->add_option("--b", c.b)->capture_default_str();
  vor->add_option("--g", c.g);
  vor->add_option("--kmax", c.kmax)->capture_default_str();
  vor->add_option("--tol", c.tol, "quadrature relative tolerance")->capture_default_str();
  vor->add_option("--table", c.table, "moments JSON to re-ingest");
  add_output_options(vor, c);
  auto* vmc = verify->add_subcommand("mc", "Monte Carlo moments against exact values");
  add_spec_options(vmc, c);
  vmc->add_option("--kmax", c.kmax)->capture_default_str();
  vmc->add_option("--samples", c.samples)->capture_default_str();
  vmc->add_option("--seed", c.seed)->envname("SPECDEN_SEED")->capture_default_str();
  vmc->add_option("--workers", c.workers)->capture_default_str();
  vmc->add_option("--sigmas", c.sigmas, "allowed standard errors")->capture_default_str();
  add_output_options(vmc, c);

  auto* edge = app.add_subcommand("edge", "edge-scaled limiting densities");
  edge->require_subcommand(1);
  auto* soft = edge->add_subcommand("soft", "soft edge");
  soft->add_option("--beta", c.beta)->required();
  soft->add_option("--xmin", c.xmin)->capture_default_str();
  soft->add_option("--xmax", c.xmax)->capture_default_str();
  auto* hard = edge->add_subcommand("hard", "hard edge on (0, xmax]");
  hard->add_option("--beta", c.beta)->required();
  hard->add_option("--a", c.a)->capture_default_str();
  hard->add_option("--xmax", c.xmax, "right end (default 20)");
  for (auto* e : {soft, hard}) {
    e->add_option("--step", c.step)->capture_default_str();
    e->add_option("--tol", c.tol, "integrator tolerance")->capture_default_str();
    add_output_options(e, c, "csv");
  }

  auto* mc = app.add_subcommand("mc", "Monte Carlo moments from the tridiagonal/bidiagonal models");
  add_spec_options(mc, c);
  mc->add_option("--kmax", c.kmax)->capture_default_str();
  mc->add_option("--samples", c.samples)->capture_default_str();
  mc->add_option("--seed", c.seed)->envname("SPECDEN_SEED")->capture_default_str();
  mc->add_option("--workers", c.workers)->capture_default_str();
  add_output_options(mc, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report("ParseError", e.what());
    return 2;
  }

  try {
    if (c.format.empty()) c.format = *edge ? "csv" : "json";
    if (*hard && !(*hard)["--xmax"]->count()) c.xmax = 20;
    if (*moments) run_moments(c);
    else if (*coeffs) run_coeffs(c);
    else if (*resolvent) run_resolvent(c);
    else if (*derive) run_derive(c);
    else if (*vfix) run_verify_fixtures(c);
    else if (*vode) run_verify_ode(c);
    else if (*vor) {
      if (c.table.empty() && (c.family.empty() || c.beta.empty())) fail("InvalidArgument", "verify oracle needs --table or --family and --beta");
      run_verify_oracle(c);
    } else if (*vmc) run_verify_mc(c);
    else if (*soft) run_edge(c, false);
    else if (*hard) run_edge(c, true);
    else if (*mc) run_mc(c);
  } catch (const Failed& f) {
    report("VerificationFailed", f.message);
    return 1;
  } catch (const Error& e) {
    report(e.code(), e.what());
    return kValidation.count(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    report("Internal", e.what());
    return 1;
  }
  return 0;
}
