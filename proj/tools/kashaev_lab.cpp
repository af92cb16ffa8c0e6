// kashaev_lab: command-line experiments for Kashaev's invariant and the volume conjecture.
//
// Exit codes: 0 ok, 1 check failed, 2 input error, 3 budget exceeded, 4 no convergence.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "kashaev/asymptotics.hpp"
#include "kashaev/diagram.hpp"
#include "kashaev/dilog.hpp"
#include "kashaev/gluing.hpp"
#include "kashaev/io.hpp"
#include "kashaev/state_sum.hpp"
#include "kashaev/yang_baxter.hpp"

namespace {

using namespace kashaev;
using nlohmann::json;

enum Exit { kOk = 0, kCheckFailed = 1, kInput = 2, kBudget = 3, kConvergence = 4 };

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::optional<int> n;
  std::optional<int> n_min;
  std::optional<int> n_max;
  std::optional<int> step;
  std::string builtin;
  std::string diagram_path;
  std::string system_path;
  std::string initial;
  std::string format = "json";
  int threads = 1;
  std::optional<double> tol;
};

int default_threads() {
  if (const char* env = std::getenv("KASHAEV_LAB_THREADS")) {
    try {
      const int t = std::stoi(env);
      if (t >= 1) return t;
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring KASHAEV_LAB_THREADS='" << env << "'\n";
  }
  return 1;
}

std::vector<int> n_values(const RunConfig& cfg, int default_min, int default_max) {
  std::vector<int> out;
  if (cfg.n) {
    if (cfg.n_min || cfg.n_max) throw InputError("use either --N or --n-min/--n-max");
    out.push_back(*cfg.n);
  } else {
    const int lo = cfg.n_min.value_or(default_min);
    const int hi = cfg.n_max.value_or(default_max);
    const int step = cfg.step.value_or(1);
    if (step < 1) throw InputError("--step must be >= 1");
    if (hi < lo) throw InputError("empty N range");
    for (int n = lo; n <= hi; n += step) out.push_back(n);
  }
  for (int n : out) {
    if (n < 2) throw InputError("N must be >= 2, got " + std::to_string(n));
  }
  return out;
}

TangleDiagram load_diagram(const RunConfig& cfg) {
  if (!cfg.diagram_path.empty() && !cfg.builtin.empty()) {
    throw InputError("use either --builtin or --diagram");
  }
  if (!cfg.diagram_path.empty()) {
    try {
      return diagram_from_json(read_json_file(cfg.diagram_path));
    } catch (const nlohmann::json::exception& e) {
      throw InputError(std::string("diagram file: ") + e.what());
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
  }
  const std::string name = cfg.builtin.empty() ? "figure-eight" : cfg.builtin;
  auto d = builtin_diagram(name);
  if (!d) throw InputError("unknown builtin '" + name + "'");
  return *d;
}

void require_format(const RunConfig& cfg) {
  if (cfg.format != "json" && cfg.format != "csv") {
    throw InputError("--format must be json or csv");
  }
}

// "a+bi", "a-bi", "bi", "i", "-i", "a"
cplx parse_complex(std::string s) {
  std::erase(s, ' ');
  if (s.empty()) throw InputError("empty complex number");
  const auto bad = [&] { return InputError("cannot parse complex number '" + s + "'"); };
  auto parse_real = [&](const std::string& t) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      throw bad();
    }
    if (used != t.size()) throw bad();
    return v;
  };
  if (s.back() != 'i') return {parse_real(s), 0.0};
  const std::string body = s.substr(0, s.size() - 1);
  // Split at the last sign that is not an exponent sign or the leading sign.
  std::size_t split = std::string::npos;
  for (std::size_t p = body.size(); p-- > 1;) {
    if ((body[p] == '+' || body[p] == '-') && body[p - 1] != 'e' && body[p - 1] != 'E') {
      split = p;
      break;
    }
  }
  const std::string re = split == std::string::npos ? "" : body.substr(0, split);
  std::string im = split == std::string::npos ? body : body.substr(split);
  if (im.empty() || im == "+") im = "1";
  if (im == "-") im = "-1";
  if (im.front() == '+') im.erase(0, 1);
  return {re.empty() ? 0.0 : parse_real(re), parse_real(im)};
}

ShapeAssignment parse_initial(const std::string& text, int shape_count) {
  ShapeAssignment s;
  if (text.empty()) {
    s.shapes.assign(shape_count, cplx(0.0, 1.0));
    return s;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    s.shapes.push_back(parse_complex(text.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (static_cast<int>(s.shapes.size()) != shape_count) {
    throw InputError("--initial has " + std::to_string(s.shapes.size()) + " shapes, system has " +
                     std::to_string(shape_count));
  }
  return s;
}

GluingSystem load_system(const RunConfig& cfg) {
  if (cfg.system_path.empty()) {
    if (!cfg.builtin.empty() && cfg.builtin != "figure-eight" && cfg.builtin != "4_1") {
      throw InputError("no built-in gluing system for '" + cfg.builtin + "'");
    }
    return figure_eight_gluing_system();
  }
  try {
    return gluing_system_from_json(read_json_file(cfg.system_path));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("system file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("system file: ") + e.what());
  }
}

json shapes_json(const ShapeAssignment& s) {
  json out = json::array();
  for (cplx z : s.shapes) out.push_back({{"re", z.real()}, {"im", z.imag()}});
  return out;
}

// ---------------------------------------------------------------------------

int cmd_invariant(const RunConfig& cfg) {
  require_format(cfg);
  const TangleDiagram d = load_diagram(cfg);
  const std::vector<int> ns = n_values(cfg, 2, 2);
  ContractionOptions opt;
  opt.threads = cfg.threads;
  if (cfg.format == "csv") std::cout << csv_header_invariant() << "\n";
  for (int n : ns) {
    const QContext ctx(n);
    const InvariantRecord rec = make_record(n, state_sum(ctx, d, opt));
    if (cfg.format == "csv") {
      std::cout << to_csv(rec) << "\n";
    } else {
      std::cout << to_json(rec).dump() << "\n";
    }
  }
  return kOk;
}

int cmd_check_ybe(const RunConfig& cfg) {
  require_format(cfg);
  const std::vector<int> ns = n_values(cfg, 2, 5);
  const double tol = cfg.tol.value_or(1e-9);
  bool all_pass = true;
  std::vector<YbeReport> reports;
  for (int n : ns) {
    if (n > kDefaultDenseYbeBound) {
      throw BudgetExceeded("check-ybe: dense check limited to N <= " +
                           std::to_string(kDefaultDenseYbeBound) + ", got N = " + std::to_string(n));
    }
  }
  for (int n : ns) reports.push_back(check_ybe(QContext(n)));
  if (cfg.format == "csv") {
    std::cout << "N,braid,mu_commutation,partial_trace_positive,partial_trace_negative,pass\n";
  }
  for (const YbeReport& r : reports) {
    const bool pass = r.max_residual() < tol;
    all_pass = all_pass && pass;
    if (cfg.format == "csv") {
      std::cout << r.N << "," << format_double(r.braid) << "," << format_double(r.mu_commutation)
                << "," << format_double(r.trace_positive) << "," << format_double(r.trace_negative)
                << "," << (pass ? "true" : "false") << "\n";
    } else {
      std::cout << json{{"N", r.N},
                        {"braid", r.braid},
                        {"mu_commutation", r.mu_commutation},
                        {"partial_trace_positive", r.trace_positive},
                        {"partial_trace_negative", r.trace_negative},
                        {"tol", tol},
                        {"pass", pass}}
                       .dump()
                << "\n";
    }
  }
  return all_pass ? kOk : kCheckFailed;
}

int cmd_volume_fit(const RunConfig& cfg) {
  require_format(cfg);
  if (cfg.n) throw InputError("volume-fit takes --n-min/--n-max, not --N");
  const int n_max = cfg.n_max.value_or(1000);
  const int n_min = cfg.n_min.value_or(std::max(2, n_max / 10));
  const int step = cfg.step.value_or(std::max(1, (n_max - n_min) / 45));
  RunConfig range = cfg;
  range.n_min = n_min;
  range.n_max = n_max;
  range.step = step;
  const std::vector<int> ns = n_values(range, n_min, n_max);

  std::vector<GrowthSample> samples;
  double geometric_vol = 0.0;
  std::optional<double> saddle;
  const std::string name = cfg.builtin.empty() && cfg.diagram_path.empty() ? "figure-eight" : cfg.builtin;
  if (cfg.diagram_path.empty() && (name == "figure-eight" || name == "4_1")) {
    for (int n : ns) samples.push_back({n, kashaev_41_log_modulus(n)});
    const GluingSystem sys = load_system(cfg);
    const NewtonResult sol = newton_solve(sys, parse_initial(cfg.initial, sys.shape_count()));
    geometric_vol = volume(sol.shapes);
    saddle = saddle_volume_prediction();
  } else if (cfg.diagram_path.empty() && (name == "trefoil" || name == "3_1")) {
    for (int n : ns) samples.push_back({n, kashaev_31_log_modulus(n)});
  } else {
    const TangleDiagram d = load_diagram(cfg);
    if (!cfg.system_path.empty()) {
      const GluingSystem sys = load_system(cfg);
      geometric_vol = volume(newton_solve(sys, parse_initial(cfg.initial, sys.shape_count())).shapes);
    }
    ContractionOptions opt;
    opt.threads = cfg.threads;
    for (int n : ns) samples.push_back({n, std::log(std::abs(state_sum(QContext(n), d, opt)))});
  }

  if (cfg.format == "csv") {
    std::cout << "N,log_modulus,volume_point\n";
    for (const GrowthSample& s : samples) {
      std::cout << s.N << "," << format_double(s.log_modulus) << ","
                << format_double(volume_point_from_log(s.N, s.log_modulus)) << "\n";
    }
    return kOk;
  }
  const GrowthFit fit = fit_growth(samples, true);
  const GrowthFit plain = fit_growth(samples, false);
  const ConjectureReport rep = conjecture_report(fit, geometric_vol, saddle);
  json out = to_json(rep);
  out["fit_without_log_term"] = to_json(plain);
  out["volume_point_at_n_max"] = volume_point_from_log(samples.back().N, samples.back().log_modulus);
  std::cout << out.dump() << "\n";
  return kOk;
}

int cmd_gluing_solve(const RunConfig& cfg) {
  require_format(cfg);
  const GluingSystem sys = load_system(cfg);
  NewtonOptions opt;
  if (cfg.tol) opt.tol = *cfg.tol;
  const NewtonResult sol = newton_solve(sys, parse_initial(cfg.initial, sys.shape_count()), opt);
  const std::vector<double> res = equation_residuals(sys, sol.shapes);
  if (cfg.format == "csv") {
    std::cout << "shape,re,im\n";
    for (std::size_t i = 0; i < sol.shapes.shapes.size(); ++i) {
      std::cout << i << "," << format_double(sol.shapes.shapes[i].real()) << ","
                << format_double(sol.shapes.shapes[i].imag()) << "\n";
    }
    return kOk;
  }
  json residuals = json::object();
  for (std::size_t j = 0; j < res.size(); ++j) residuals[sys.names()[j]] = res[j];
  std::cout << json{{"shapes", shapes_json(sol.shapes)},
                    {"residuals", residuals},
                    {"log_residual", sol.residual},
                    {"iterations", sol.iterations},
                    {"trace", sol.trace},
                    {"volume", volume(sol.shapes)}}
                   .dump()
            << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kashaev invariant and volume conjecture experiments"};
  app.require_subcommand(1);
  RunConfig cfg;
  cfg.threads = default_threads();

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "Output format: json or csv");
    sub->add_option("--threads", cfg.threads, "Worker threads (default: KASHAEV_LAB_THREADS or 1)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--tol", cfg.tol, "Tolerance override");
  };
  auto add_range = [&](CLI::App* sub) {
    sub->add_option("--N", cfg.n, "Single N");
    sub->add_option("--n-min", cfg.n_min, "Smallest N");
    sub->add_option("--n-max", cfg.n_max, "Largest N");
    sub->add_option("--step", cfg.step, "N step");
  };

  CLI::App* inv = app.add_subcommand("invariant", "Evaluate the state sum on a diagram");
  add_common(inv);
  add_range(inv);
  inv->add_option("--builtin", cfg.builtin, "figure-eight, trefoil, kink, unknot");
  inv->add_option("--diagram", cfg.diagram_path, "Diagram JSON file");

  CLI::App* ybe = app.add_subcommand("check-ybe", "Dense enhanced Yang-Baxter residuals");
  add_common(ybe);
  add_range(ybe);

  CLI::App* fit = app.add_subcommand("volume-fit", "Growth fit against the geometric volume");
  add_common(fit);
  add_range(fit);
  fit->add_option("--builtin", cfg.builtin, "figure-eight or trefoil");
  fit->add_option("--diagram", cfg.diagram_path, "Diagram JSON file (evaluated by state sum)");
  fit->add_option("--system", cfg.system_path, "Gluing system JSON for the geometric volume");
  fit->add_option("--initial", cfg.initial, "Initial shapes, e.g. 0.4+1.2i,0.7+0.8i");

  CLI::App* glue = app.add_subcommand("gluing-solve", "Solve a gluing system and report the volume");
  add_common(glue);
  glue->add_option("--builtin", cfg.builtin, "figure-eight");
  glue->add_option("--system", cfg.system_path, "Gluing system JSON file");
  glue->add_option("--initial", cfg.initial, "Initial shapes, e.g. 0.4+1.2i,0.7+0.8i");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  try {
    if (*inv) return cmd_invariant(cfg);
    if (*ybe) return cmd_check_ybe(cfg);
    if (*fit) return cmd_volume_fit(cfg);
    if (*glue) return cmd_gluing_solve(cfg);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const DiagramError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBudget;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\ntrace:";
    for (double r : e.trace()) std::cerr << " " << format_double(r);
    std::cerr << "\n";
    return kConvergence;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConvergence;
  }
  return kInput;
}
