// mtkit: command-line driver for the Malmquist-Takenaka toolkit.
//
//   mtkit basis   --seq a_r --k 5 --grid 4096 --out basis.csv
//   mtkit ortho   --seq a_r --k 5
//   mtkit maximal --seq d_r --k 8 --seed 3 --out max.csv --levels-out levels.csv
//   mtkit unwind  --degree 8 --steps 10 --seed 1 --out steps.jsonl
//   mtkit probe   --k 10 --lambda 8 --trials 20 --out probe.csv
//   mtkit exp thm1 --k-min 4 --k-max 9 --out thm1.csv --plot thm1.svg --calibrate
//
// Exit codes: 0 success, 2 invalid arguments, 3 resource guard, 4 numeric instability.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mtkit/experiments.hpp"
#include "mtkit/mt_system.hpp"
#include "mtkit/unwinding.hpp"

namespace {

using namespace mtk;

struct Common {
  int grid = 0;
  std::uint64_t seed = 1;
  std::string out;
  bool calibrate = false;
  std::string constants = "mtkit_constants.txt";
};

struct SequenceArgs {
  std::string kind = "a_r";
  int k = 0;
  double r = 0.0;
  int length = 0;
  std::string file;
  bool unsafe = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--grid", c.grid, "grid size N (power of two; 0 = automatic)");
  app->add_option("--seed", c.seed, "64-bit seed for all randomness");
  app->add_option("--out", c.out, "output path (default: stdout)");
  app->add_flag("--calibrate", c.calibrate, "record derived constants to --constants");
  app->add_option("--constants", c.constants, "constants file written by --calibrate");
}

void add_sequence(CLI::App* app, SequenceArgs& s) {
  app->add_option("--seq", s.kind, "a_r | a_r_extended | d_r | d_r_arc | b | zero");
  app->add_option("--k", s.k, "r = 1 - 2^-k");
  app->add_option("--r", s.r, "sequence parameter r (alternative to --k)");
  app->add_option("--length", s.length, "length for b and zero");
  app->add_option("--seq-file", s.file, "MTSequence CSV (index,modulus,angle)");
  app->add_flag("--unsafe", s.unsafe, "skip the grid resolution guard");
}

MTSequence resolve_sequence(const SequenceArgs& s) {
  if (!s.file.empty()) return sequence_from_csv(CsvTable::load(s.file));
  double r = s.r;
  if (s.k != 0) {
    if (s.k < 2 || s.k > 30) throw InvalidArgument("--k must lie in [2, 30]");
    if (s.r != 0.0) throw InvalidArgument("give either --k or --r, not both");
    r = 1.0 - std::ldexp(1.0, -s.k);
  }
  return make_sequence(parse_sequence_kind(s.kind), {r, s.length});
}

CircleGrid resolve_grid(const Common& c, const MTSequence& seq) {
  return CircleGrid(c.grid > 0 ? c.grid : required_grid_size(seq));
}

void emit(const Common& c, const std::string& content) {
  if (c.out.empty())
    std::cout << content;
  else
    write_text_file(c.out, content);
}

void finish(const Common& c, const Constants& summary) {
  for (const auto& [k, v] : summary) std::cerr << k << '=' << fmt17(v) << '\n';
  if (c.calibrate) save_constants(c.constants, summary);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

// key=value lines become "--key value" arguments placed before the real ones;
// every option keeps its last value, so explicit flags win over the file.
std::vector<std::string> config_arguments(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file '" + path + "'");
  std::vector<std::string> args;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line.substr(0, line.find('#')));
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw InvalidArgument("config line without '=': " + t);
    const std::string key = trim(t.substr(0, eq)), value = trim(t.substr(eq + 1));
    if (value == "true" || value == "false") {
      if (value == "true") args.push_back("--" + key);
    } else {
      args.push_back("--" + key);
      args.push_back(value);
    }
  }
  return args;
}

// Splits off the config file and rebuilds argv as: program, subcommand path,
// config-derived flags, remaining user arguments.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string config;
  std::vector<std::string> rest;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw InvalidArgument("--config needs a path");
      config = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  std::vector<std::string> out{argv[0]};
  size_t lead = 0;
  // Subcommand names (and the experiment name) precede any option.
  while (lead < rest.size() && lead < 2 && rest[lead].rfind("-", 0) != 0) out.push_back(rest[lead++]);
  if (!config.empty())
    for (auto& a : config_arguments(config)) out.push_back(std::move(a));
  out.insert(out.end(), rest.begin() + static_cast<long>(lead), rest.end());
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"Malmquist-Takenaka systems: bases, maximal operators, unwinding and experiments"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.add_option("--config", "key=value file; command-line flags override it");

  Common common;
  SequenceArgs sargs;

  auto* basis = app.add_subcommand("basis", "dump the basis functions phi_n on a grid");
  add_common(basis, common);
  add_sequence(basis, sargs);
  std::string seq_out;
  basis->add_option("--sequence-out", seq_out, "also write the point sequence CSV");

  auto* ortho = app.add_subcommand("ortho", "Gram-matrix deviation from the identity");
  add_common(ortho, common);
  add_sequence(ortho, sargs);

  auto* maximal = app.add_subcommand("maximal", "maximal partial sum of a function");
  add_common(maximal, common);
  add_sequence(maximal, sargs);
  std::string f_file, levels_out, expansion_out;
  maximal->add_option("--f-file", f_file, "GridFunction CSV; default is a random analytic polynomial");
  maximal->add_option("--levels-out", levels_out, "write the maximizing level function");
  maximal->add_option("--expansion-out", expansion_out, "write the expansion coefficients");

  auto* unwind_cmd = app.add_subcommand("unwind", "phase unwinding of a polynomial");
  add_common(unwind_cmd, common);
  int degree = 8, steps = 10;
  std::string coeffs;
  unwind_cmd->add_option("--degree", degree, "degree of the random polynomial");
  unwind_cmd->add_option("--steps", steps, "number of unwinding steps");
  unwind_cmd->add_option("--coeffs", coeffs, "explicit coefficients c0,c1,... each re or re:im");

  auto* probe = app.add_subcommand("probe", "quadratic-form probe report");
  add_common(probe, common);
  ExperimentConfig pcfg;
  probe->add_option("--k", pcfg.k_min, "r = 1 - 2^-k")->default_val(8);
  probe->add_option("--lambda", pcfg.lambda, "even dilation factor");
  probe->add_option("--trials", pcfg.trials, "random (g, N) trials");

  auto* exp = app.add_subcommand("exp", "run an experiment or render a plot");
  add_common(exp, common);
  ExperimentConfig ecfg;
  std::string plot_path, csv_in, x_col, y_cols, title, filter;
  bool scatter = false;
  exp->add_option("name", ecfg.name, "thm1 | counterexample | lacunary | corollary_b | probe | plot")->required();
  exp->add_option("--k-min", ecfg.k_min);
  exp->add_option("--k-max", ecfg.k_max);
  exp->add_option("--m-min", ecfg.m_min);
  exp->add_option("--m-max", ecfg.m_max);
  exp->add_option("--trials", ecfg.trials);
  exp->add_option("--lambda", ecfg.lambda);
  exp->add_option("--jobs", ecfg.jobs, "worker threads for sweep entries");
  exp->add_flag("--unsafe", ecfg.unsafe, "skip the grid resolution guard");
  exp->add_option("--plot", plot_path, "also render an SVG of the result");
  exp->add_option("--csv", csv_in, "input CSV for 'plot'");
  exp->add_option("--x", x_col, "x column for plots");
  exp->add_option("--y", y_cols, "comma-separated y columns for plots");
  exp->add_option("--title", title);
  exp->add_option("--filter", filter, "column=value row filter for plots");
  exp->add_flag("--scatter", scatter);

  std::vector<std::string> expanded;
  try {
    expanded = expand_config(argc, argv);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  }
  std::vector<char*> cargv;
  for (auto& s : expanded) cargv.push_back(s.data());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (basis->parsed()) {
    const MTSequence seq = resolve_sequence(sargs);
    const MTBasis b = build_basis(seq, resolve_grid(common, seq), {sargs.unsafe});
    emit(common, basis_csv(b).str());
    if (!seq_out.empty()) sequence_csv(seq).save(seq_out);
    finish(common, {{"basis.size", b.size()}, {"basis.grid", b.grid().size()}});
  } else if (ortho->parsed()) {
    const MTSequence seq = resolve_sequence(sargs);
    const MTBasis b = build_basis(seq, resolve_grid(common, seq), {sargs.unsafe});
    const double dev = orthonormality_deviation(b);
    CsvTable t({"size", "grid", "max_deviation"});
    t.add_row(row({b.size(), b.grid().size(), dev}));
    emit(common, t.str());
    finish(common, {{"ortho.max_deviation", dev}});
  } else if (maximal->parsed()) {
    const MTSequence seq = resolve_sequence(sargs);
    GridFunction f = GridFunction::zeros(CircleGrid(2));
    MTBasis b = [&] {
      if (!f_file.empty()) {
        f = grid_function_from_csv(CsvTable::load(f_file));
        if (common.grid > 0 && common.grid != f.size())
          throw InvalidArgument("--grid disagrees with the size of --f-file");
        return build_basis(seq, f.grid(), {sargs.unsafe});
      }
      MTBasis built = build_basis(seq, resolve_grid(common, seq), {sargs.unsafe});
      Rng rng = entry_rng(common.seed, 0);
      f = random_analytic_polynomial(built.grid(), seq.size(), rng);
      return built;
    }();
    const MaximalResult m = maximal_partial_sum(f, b);
    emit(common, grid_function_csv(m.value).str());
    if (!levels_out.empty()) level_function_csv(m.argmax).save(levels_out);
    if (!expansion_out.empty()) expansion_csv(expand(f, b)).save(expansion_out);
    finish(common, {{"maximal.ratio", m.value.norm() / f.norm()}});
  } else if (unwind_cmd->parsed()) {
    Eigen::VectorXcd c;
    if (!coeffs.empty()) {
      std::vector<cplx> parsed;
      std::stringstream ss(coeffs);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        const auto colon = tok.find(':');
        try {
          parsed.emplace_back(std::stod(tok.substr(0, colon)),
                              colon == std::string::npos ? 0.0 : std::stod(tok.substr(colon + 1)));
        } catch (const std::exception&) {
          throw InvalidArgument("bad coefficient '" + tok + "'");
        }
      }
      c = Eigen::Map<Eigen::VectorXcd>(parsed.data(), static_cast<long>(parsed.size()));
    } else {
      if (degree < 0 || degree > 512) throw InvalidArgument("--degree must lie in [0, 512]");
      Rng rng = entry_rng(common.seed, 0);
      c.resize(degree + 1);
      for (auto& v : c) v = complex_normal(rng);
    }
    const UnwindingResult res = unwind(PolynomialH2(c), steps);
    std::ostringstream os;
    write_unwinding_jsonl(os, res);
    emit(common, os.str());
    double bessel = 0.0;
    for (cplx v : res.constants) bessel += std::norm(v);
    const int n = std::max(64, 4 * (res.original.degree() + 1));
    int pow2 = 1;
    while (pow2 < n) pow2 *= 2;
    finish(common, {{"unwind.steps", static_cast<double>(res.constants.size())},
                    {"unwind.telescoping_error", telescoping_error(res, CircleGrid(pow2))},
                    {"unwind.bessel_gap", bessel - res.original.norm() * res.original.norm()}});
  } else if (probe->parsed()) {
    pcfg.name = "probe";
    pcfg.k_max = pcfg.k_min;
    pcfg.grid = common.grid;
    pcfg.seed = common.seed;
    const CsvTable t = run_probe(pcfg);
    emit(common, t.str());
    finish(common, derive_constants("probe", t));
  } else if (exp->parsed()) {
    if (ecfg.name == "plot") {
      if (csv_in.empty() || x_col.empty() || y_cols.empty())
        throw InvalidArgument("plot needs --csv, --x and --y");
      if (common.out.empty()) throw InvalidArgument("plot needs --out");
      PlotSpec spec;
      spec.x_column = x_col;
      std::stringstream ss(y_cols);
      for (std::string y; std::getline(ss, y, ',');) spec.y_columns.push_back(y);
      spec.title = title;
      spec.scatter = scatter;
      if (!filter.empty()) {
        const auto eq = filter.find('=');
        if (eq == std::string::npos) throw InvalidArgument("--filter expects column=value");
        spec.filter_column = filter.substr(0, eq);
        spec.filter_value = filter.substr(eq + 1);
      }
      emit_plot(csv_in, spec, common.out);
      return 0;
    }
    ecfg.grid = common.grid;
    ecfg.seed = common.seed;
    const CsvTable t = run_experiment(ecfg);
    emit(common, t.str());
    if (!plot_path.empty()) {
      PlotSpec spec;
      spec.title = ecfg.name;
      if (ecfg.name == "thm1") spec.x_column = "k", spec.y_columns = {"rho_random", "rho_adversary"};
      else if (ecfg.name == "counterexample") spec.x_column = "k", spec.y_columns = {"ratio_sq"}, spec.filter_column = "variant", spec.filter_value = "d_r";
      else if (ecfg.name == "lacunary") spec.x_column = "m", spec.y_columns = {"D_minus_2m"};
      else if (ecfg.name == "corollary_b") spec.x_column = "m", spec.y_columns = {"rho_random", "rho_adversary"};
      else spec.x_column = "trial", spec.y_columns = {"ratio"}, spec.scatter = true;
      write_text_file(plot_path, render_plot(t, spec));
    }
    finish(common, derive_constants(ecfg.name, t));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const mtk::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::bad_alloc&) {
    std::cerr << "error: out of memory\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
