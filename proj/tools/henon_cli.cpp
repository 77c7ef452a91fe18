#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "henon/hybrid.hpp"
#include "henon/homogenization.hpp"
#include "henon/json_io.hpp"
#include "henon/parallel.hpp"

namespace {

using namespace henon;

constexpr int kExitParse = 2;
constexpr int kExitPrecision = 3;
constexpr int kExitTie = 4;
constexpr int kExitViolation = 5;

C parse_complex(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) return C(std::stod(s), 0.0);
  return C(std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1)));
}

// "3/2", "-4" or "inf" (the +infinity order of a zero coordinate)
std::optional<Rat> parse_ord(const std::string& s) {
  if (s == "inf") return std::nullopt;
  return Rat(s);
}

std::uint64_t env_seed() {
  if (const char* e = std::getenv("HENONLAB_SEED")) return std::strtoull(e, nullptr, 10);
  return 1;
}

json green_json(const ComplexHenon& h, C x, C y, double eps, int budget) {
  const GreenEstimate gp = green_plus(h, x, y, eps, budget);
  const GreenEstimate gm = green_minus(h, x, y, eps, budget);
  const GreenEstimate g = green_max(h, x, y, eps, budget);
  json out;
  out["value"] = g.value;
  out["err_bound"] = g.error;
  out["status"] = g.escaped ? (gp.value >= gm.value ? "EscapedPlus" : "EscapedMinus")
                            : "BoundedToBudget";
  const auto ep = escape_time(h, x, y, +1, budget);
  const auto em = escape_time(h, x, y, -1, budget);
  out["escape_time_plus"] = ep ? json(*ep) : json();
  out["escape_time_minus"] = em ? json(*em) : json();
  out["green_plus"] = json{{"value", gp.value}, {"err_bound", gp.error}};
  out["green_minus"] = json{{"value", gm.value}, {"err_bound", gm.error}};
  return out;
}

int cmd_green(const std::string& spec_path, const std::string& t_str, const std::string& x_str,
              const std::string& y_str, double eps, int budget, std::ostream& os) {
  const FamilySpec spec = family_from_file(spec_path);
  const C t = parse_complex(t_str);
  if (t == C(0.0, 0.0)) throw std::invalid_argument("green needs t != 0");
  const ComplexHenon h = spec.family.at(t);
  os << green_json(h, parse_complex(x_str), parse_complex(y_str), eps, budget).dump(2)
     << '\n';
  return 0;
}

int cmd_tropical(const std::string& spec_path, const std::string& u_str,
                 const std::string& v_str, int budget, std::ostream& os) {
  const FamilySpec spec = family_from_file(spec_path);
  const HenonFamily& f = spec.family;
  ValPoint w{parse_ord(u_str), parse_ord(v_str)};
  const long rho = na_radius_ord(f);
  const auto ords = f.coeff_orders();
  const auto oa = f.ord_a();

  json orbit = json::array();
  json out;
  try {
    ValPoint cur = w;
    for (int n = 0; n <= budget; ++n) {
      json step = val_point_to_json(cur);
      step["region"] = region_name(na_classify(f, cur, rho));
      orbit.push_back(step);
      if (na_classify(f, cur, rho) == Region::VPlus) break;
      if (n == budget) break;
      cur = tropical_step(cur, ords, oa, f.d);
    }
    out["orbit"] = orbit;
    out["green_plus"] = na_green_to_json(na_green_plus(f, w, budget));
    out["green_minus"] = na_green_to_json(na_green_minus(f, w, budget));
    os << out.dump(2) << '\n';
    return 0;
  } catch (const TropicalTie& tie) {
    out["orbit"] = orbit;
    out["tie"] = json::array();
    for (const int m : tie.minimizers) out["tie"].push_back(m);
    out["note"] = "generic order undetermined; rerun with exact series coordinates";
    os << out.dump(2) << '\n';
    return kExitTie;
  }
}

int cmd_experiment(const std::string& spec_path, const std::string& which,
                   const std::string& out_dir, int n_max, int resolution, double eps,
                   int budget, std::ostream& os) {
  const FamilySpec spec = family_from_file(spec_path);
  const HenonFamily& f = spec.family;
  const HybridBase base = HybridBase::default_ladder(spec.r);
  std::filesystem::create_directories(out_dir);

  DegenerationReport rep;
  if (which == "uniformity") {
    rep = run_green_uniformity(f, base, 2, n_max, 400, env_seed());
  } else if (which == "measure") {
    MeasureConvergenceParams mp;
    mp.resolution = resolution;
    mp.eps = eps;
    std::vector<HybridObservable> obs;
    obs.push_back({"max_log", [](double lx, double ly) { return std::max(lx, ly); }});
    obs.push_back({"sum_log", [](double lx, double ly) { return lx + ly; }});
    obs.push_back({"exp_gap", [](double lx, double ly) { return std::exp(-std::abs(lx - ly)); }});
    rep = run_measure_convergence(f, base, obs, mp);
  } else if (which == "lyapunov") {
    rep = run_lyapunov_degeneration(f, base);
  } else if (which == "homogenization") {
    rep.experiment = "homogenization";
    rep.columns = {"n", "deg", "sections", "pass"};
    for (int n = 1; n <= std::min(n_max, 6); ++n) {
      bool ok = true;
      try {
        const HomogeneousDatum dat = homogenize_datum(f, n, budget);
        json snap;
        snap["n"] = n;
        snap["deg"] = dat.deg;
        snap["sections"] = json::array();
        for (const auto& s : dat.sections) {
          json terms = json::array();
          for (const auto& [k, c] : s.num.terms())
            terms.push_back(json{{"exps", {k[0], k[1], k[2]}}, {"coeff", laurent_to_json(c)}});
          snap["sections"].push_back(json{{"apow", s.apow}, {"num", terms}});
        }
        std::ofstream snap_out(std::filesystem::path(out_dir) /
                               ("homogenization_n" + std::to_string(n) + ".json"));
        snap_out << snap.dump(2) << '\n';
      } catch (const StructureViolation&) {
        ok = false;
        ++rep.violations;
      }
      rep.rows.push_back({static_cast<double>(n), std::pow(f.d, n), 5.0, ok ? 1.0 : 0.0});
    }
  } else {
    throw std::invalid_argument("unknown experiment: " + which);
  }

  const auto stem = std::filesystem::path(out_dir) / rep.experiment;
  {
    std::ofstream csv(stem.string() + ".csv");
    write_report_csv(rep, csv);
    std::ofstream js(stem.string() + ".json");
    write_report_json(rep, js);
    std::ofstream dat(stem.string() + ".dat");
    write_report_dat(rep, dat);
  }
  os << "wrote " << stem.string() << ".{csv,json,dat}; violations=" << rep.violations
     << '\n';
  return rep.violations == 0 ? 0 : kExitViolation;
}

int cmd_normalize(const std::string& spec_path, long prec, std::ostream& os) {
  // spec with d+1 coefficients a0..ad (a0 not necessarily 1) plus a, b
  std::ifstream in(spec_path);
  if (!in) throw std::invalid_argument("cannot open spec file: " + spec_path);
  json j;
  in >> j;
  GeneralFamily g;
  g.d = j.at("d").get<int>();
  const auto& coeffs = j.at("coeffs");
  if (!coeffs.is_array() || coeffs.size() != static_cast<std::size_t>(g.d) + 1)
    throw std::invalid_argument("normalize needs coeffs a0..ad");
  for (const auto& c : coeffs) g.coeffs.push_back(laurent_from_json(c));
  g.a = laurent_from_json(j.at("a"));
  g.b = j.contains("b") ? laurent_from_json(j.at("b"))
                        : LaurentPoly::constant(CRat(Rat(1), Rat(0)));

  const NormalizedFamily nf = normalize_family(g, prec);
  if (!verify_normalization(g, nf))
    throw InsufficientPrecision("normalization failed its conjugation check");

  json out;
  out["subst_exponent"] = nf.subst_exponent;
  out["prec"] = nf.prec;
  out["d"] = nf.family.d;
  out["coeffs"] = json::array();
  for (const auto& ai : nf.family.a_coeffs) out["coeffs"].push_back(laurent_to_json(ai));
  out["a"] = laurent_to_json(nf.family.a);
  json lam = json::array();
  for (const auto& [e, c] : nf.lambda.coeffs())
    lam.push_back(json::array({e, boost::multiprecision::numerator(c.re).str(),
                               boost::multiprecision::denominator(c.re).str(),
                               boost::multiprecision::numerator(c.im).str(),
                               boost::multiprecision::denominator(c.im).str()}));
  out["lambda"] = lam;
  os << out.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certified dynamics of degenerating complex Henon families"};
  app.require_subcommand(1);

  std::string spec_path, t_str = "0.25", x_str = "0,0", y_str = "0,0";
  std::string u_str = "0", v_str = "0", which = "uniformity", out_dir = "out";
  double eps = 1e-10, grid_eps = 0.25;
  int budget = 64, threads = 0, resolution = 16, n_max = 8;
  long prec = 32;

  auto* green = app.add_subcommand("green", "certified Green function at a point");
  green->add_option("--spec", spec_path, "family spec JSON")->required();
  green->add_option("--t", t_str, "parameter RE,IM");
  green->add_option("--x", x_str, "x coordinate RE,IM");
  green->add_option("--y", y_str, "y coordinate RE,IM");
  green->add_option("--eps", eps, "target error bound");
  green->add_option("--budget", budget, "escape budget");

  auto* trop = app.add_subcommand("tropical", "valuation orbit over the Laurent field");
  trop->add_option("--spec", spec_path, "family spec JSON")->required();
  trop->add_option("--u", u_str, "ord(x): rational or 'inf'");
  trop->add_option("--v", v_str, "ord(y): rational or 'inf'");
  trop->add_option("--budget", budget, "step budget");

  auto* exp = app.add_subcommand("experiment", "degeneration experiment along the ladder");
  exp->add_option("--spec", spec_path, "family spec JSON")->required();
  exp->add_option("--which", which, "uniformity|measure|lyapunov|homogenization");
  exp->add_option("--out", out_dir, "output directory");
  exp->add_option("--n-max", n_max, "deepest iterate");
  exp->add_option("--resolution", resolution, "grid nodes per axis");
  exp->add_option("--eps", grid_eps, "smoothing width (box fraction)");
  exp->add_option("--budget", budget, "symbolic budget");

  auto* norm = app.add_subcommand("normalize", "monic normalization of a general family");
  norm->add_option("--spec", spec_path, "general family spec JSON (coeffs a0..ad)")
      ->required();
  norm->add_option("--prec", prec, "series truncation");

  app.add_option("--threads", threads, "worker pool cap (0 = hardware)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitParse;
  }
  if (threads > 0) set_default_thread_count(threads);

  std::cout.precision(17);
  try {
    if (green->parsed()) return cmd_green(spec_path, t_str, x_str, y_str, eps, budget, std::cout);
    if (trop->parsed()) return cmd_tropical(spec_path, u_str, v_str, budget, std::cout);
    if (exp->parsed())
      return cmd_experiment(spec_path, which, out_dir, n_max, resolution, grid_eps, budget,
                            std::cout);
    if (norm->parsed()) return cmd_normalize(spec_path, prec, std::cout);
  } catch (const TropicalTie& tie) {
    std::cerr << "tropical tie between monomials:";
    for (const int m : tie.minimizers) std::cerr << ' ' << m;
    std::cerr << '\n';
    return kExitTie;
  } catch (const InsufficientPrecision& e) {
    std::cerr << "precision: " << e.what() << '\n';
    return kExitPrecision;
  } catch (const NonFiniteField& e) {
    std::cerr << "overflow: " << e.what() << '\n';
    return kExitPrecision;
  } catch (const json::exception& e) {
    std::cerr << "spec parse: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  }
  return 0;
}
