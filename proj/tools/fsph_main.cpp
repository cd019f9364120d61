// Command-line front door: parses one subcommand, builds the configured
// pipeline, emits CSV/JSON artifacts, and maps outcomes onto the exit-code
// contract 0 = pass, 1 = invariant failure, 2 = configuration error,
// 3 = numerical non-convergence.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fsph/continuation.hpp"
#include "fsph/defining_function.hpp"
#include "fsph/function_spec.hpp"
#include "fsph/functionals.hpp"
#include "fsph/io.hpp"
#include "fsph/specfun.hpp"
#include "fsph/verify.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNonConvergence = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << text;
  if (!out.good()) throw std::runtime_error("failed writing output file: " + path);
}

// A function source is either a builtin form ("zonal:0.3*cos", "const:0.1",
// "conformal:n=2:a=0.5"), an @-prefixed JSON file, or a bare *.json path.
fsph::FunctionSpec load_spec(const std::string& text, int default_n) {
  if (text.empty()) throw std::invalid_argument("missing function specification");
  if (text.front() == '@') return fsph::function_spec_from_json(read_file(text.substr(1)));
  if (text.size() > 5 && text.substr(text.size() - 5) == ".json") {
    return fsph::function_spec_from_json(read_file(text));
  }
  return fsph::parse_builtin(text, default_n);
}

// Optional JSON config whose keys mirror the long flags; explicit flags take
// precedence.  Unknown keys are rejected so typos cannot silently vanish.
class ConfigLayer {
 public:
  void load(const std::string& path) {
    if (path.empty()) return;
    data_ = nlohmann::json::parse(read_file(path));
    if (!data_.is_object()) {
      throw std::invalid_argument("config file must hold a JSON object: " + path);
    }
  }

  template <typename T>
  void fill(const CLI::Option* opt, const char* key, T& value) {
    known_.push_back(key);
    if (data_.is_null() || !data_.contains(key)) return;
    if (opt != nullptr && opt->count() > 0) return;  // flags win
    value = data_.at(key).get<T>();
  }

  void finish() const {
    if (data_.is_null()) return;
    for (const auto& item : data_.items()) {
      bool ok = false;
      for (const auto& key : known_) ok = ok || item.key() == key;
      if (!ok) throw std::invalid_argument("unknown config key: " + item.key());
    }
  }

 private:
  nlohmann::json data_;
  std::vector<std::string> known_;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

void check_out_format(const std::string& out) {
  require(out == "csv" || out == "json", "--out must be csv or json");
}

std::vector<double> parse_gammas(const std::string& text, int n) {
  require(!text.empty(), "missing --gammas");
  std::vector<double> gammas;
  if (text.find(':') == std::string::npos) {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      std::size_t used = 0;
      const double g = std::stod(item, &used);
      require(used == item.size(), "invalid gamma value: " + item);
      gammas.push_back(g);
    }
    require(!gammas.empty(), "empty --gammas list");
    return gammas;
  }
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  require(parts.size() == 3 || parts.size() == 4,
          "--gammas range must be start:end:count[:geometric]");
  const double start = std::stod(parts[0]);
  const double end = std::stod(parts[1]);
  const int count = std::stoi(parts[2]);
  require(count >= 2, "--gammas range needs count >= 2");
  require(start < end, "--gammas range needs start < end");
  const bool geometric = parts.size() == 4;
  if (geometric) {
    require(parts[3] == "geometric", "unknown range mode: " + parts[3]);
    // place the distances to the limiting order n/2 in geometric progression
    const double g0 = 0.5 * n - start;
    const double g1 = 0.5 * n - end;
    require(g1 > 0.0, "geometric --gammas range must stay below n/2");
    const double ratio = g1 / g0;
    for (int k = 0; k < count; ++k) {
      gammas.push_back(0.5 * n - g0 * std::pow(ratio, static_cast<double>(k) / (count - 1)));
    }
  } else {
    for (int k = 0; k < count; ++k) {
      gammas.push_back(start + (end - start) * static_cast<double>(k) / (count - 1));
    }
  }
  return gammas;
}

fsph::CsvTable deficit_table(const fsph::DeficitReport& rep) {
  fsph::CsvTable table;
  table.header = {"n", "gamma", "lhs", "rhs", "deficit"};
  table.rows.push_back({static_cast<double>(rep.n), rep.gamma, rep.lhs, rep.rhs, rep.deficit});
  return table;
}

int emit_deficit(const fsph::DeficitReport& rep, const std::string& out,
                 const std::string& path, double violation, double tolerance) {
  write_text(path, out == "json" ? fsph::deficit_json(rep) : fsph::to_csv(deficit_table(rep)));
  if (violation > tolerance) {
    std::fprintf(stderr, "invariant failure: %s violated by %s (tolerance %s) for %s\n",
                 rep.name.c_str(), fsph::format_full(violation).c_str(),
                 fsph::format_full(tolerance).c_str(), rep.input.c_str());
    return kExitInvariant;
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sharp spectral inequalities on round spheres: tables, deficits, and\n"
               "dimensional-continuation pipelines.  JSON config files mirror the long\n"
               "flags of each subcommand; explicit flags take precedence.  The\n"
               "FSPH_THREADS environment variable sets the worker count for sweeps."};
  app.require_subcommand(1);
  int exit_code = kExitPass;

  // ------------------------------------------------------------- spectrum
  auto* spectrum = app.add_subcommand(
      "spectrum", "Emit the multiplier spectrum mu_l for l = 0..L on S^n");
  struct {
    int n = 0;
    double gamma = std::nan("");
    int L = 16;
    std::string config, out = "csv", path;
  } sp;
  auto* sp_n = spectrum->add_option("--n", sp.n, "sphere dimension (2, 3, or 4)");
  auto* sp_g = spectrum->add_option("--gamma", sp.gamma, "operator order / 2");
  auto* sp_L = spectrum->add_option("--L", sp.L, "largest degree (default 16)");
  auto* sp_out = spectrum->add_option("--out", sp.out, "output format: csv or json");
  auto* sp_path = spectrum->add_option("--path", sp.path, "output file (default stdout)");
  spectrum->add_option("--config", sp.config, "JSON config mirroring the flags");
  spectrum->callback([&] {
    ConfigLayer cfg;
    cfg.load(sp.config);
    cfg.fill(sp_n, "n", sp.n);
    cfg.fill(sp_g, "gamma", sp.gamma);
    cfg.fill(sp_L, "L", sp.L);
    cfg.fill(sp_out, "out", sp.out);
    cfg.fill(sp_path, "path", sp.path);
    cfg.finish();
    require(sp.n != 0, "missing --n");
    require(std::isfinite(sp.gamma), "missing --gamma");
    check_out_format(sp.out);
    const fsph::CsvTable table = fsph::spectrum_table(sp.n, sp.gamma, sp.L);
    write_text(sp.path, sp.out == "json" ? fsph::to_json_string(table) : fsph::to_csv(table));
    exit_code = kExitPass;
  });

  // -------------------------------------------------------------- sobolev
  auto* sobolev = app.add_subcommand(
      "sobolev", "Deficit of the sharp fractional inequality for a test function");
  struct {
    int n = 0;
    double gamma = std::nan("");
    std::string f;
    double tol = 1e-8;
    std::string config, out = "csv", path;
  } sb;
  auto* sb_n = sobolev->add_option("--n", sb.n, "sphere dimension (2, 3, or 4)");
  auto* sb_g = sobolev->add_option("--gamma", sb.gamma, "operator order / 2, in (0, n/2)");
  auto* sb_f = sobolev->add_option("--f", sb.f, "test function: builtin form or JSON file");
  auto* sb_tol = sobolev->add_option("--tol", sb.tol, "energy-relative slack (default 1e-8)");
  auto* sb_out = sobolev->add_option("--out", sb.out, "output format: csv or json");
  auto* sb_path = sobolev->add_option("--path", sb.path, "output file (default stdout)");
  sobolev->add_option("--config", sb.config, "JSON config mirroring the flags");
  sobolev->callback([&] {
    ConfigLayer cfg;
    cfg.load(sb.config);
    cfg.fill(sb_n, "n", sb.n);
    cfg.fill(sb_g, "gamma", sb.gamma);
    cfg.fill(sb_f, "f", sb.f);
    cfg.fill(sb_tol, "tol", sb.tol);
    cfg.fill(sb_out, "out", sb.out);
    cfg.fill(sb_path, "path", sb.path);
    cfg.finish();
    require(sb.n != 0, "missing --n");
    require(std::isfinite(sb.gamma), "missing --gamma");
    check_out_format(sb.out);
    const fsph::DeficitReport rep = fsph::sobolev_deficit(load_spec(sb.f, sb.n), sb.n, sb.gamma);
    exit_code = emit_deficit(rep, sb.out, sb.path, -rep.deficit,
                             sb.tol * std::max(1.0, std::fabs(rep.rhs)));
  });

  // --------------------------------------------------------------- onofri
  auto* onofri = app.add_subcommand(
      "onofri", "Deficit of the exponential-class inequality on S^2 or S^4");
  struct {
    int n = 0;
    std::string omega;
    double tol = 1e-6;
    std::string config, out = "csv", path;
  } on;
  auto* on_n = onofri->add_option("--n", on.n, "sphere dimension (2 or 4)");
  auto* on_w = onofri->add_option("--omega", on.omega, "weight: builtin form or JSON file");
  auto* on_tol = onofri->add_option("--tol", on.tol, "absolute slack (default 1e-6)");
  auto* on_out = onofri->add_option("--out", on.out, "output format: csv or json");
  auto* on_path = onofri->add_option("--path", on.path, "output file (default stdout)");
  onofri->add_option("--config", on.config, "JSON config mirroring the flags");
  onofri->callback([&] {
    ConfigLayer cfg;
    cfg.load(on.config);
    cfg.fill(on_n, "n", on.n);
    cfg.fill(on_w, "omega", on.omega);
    cfg.fill(on_tol, "tol", on.tol);
    cfg.fill(on_out, "out", on.out);
    cfg.fill(on_path, "path", on.path);
    cfg.finish();
    require(on.n == 2 || on.n == 4, "--n must be 2 or 4");
    check_out_format(on.out);
    const fsph::FunctionSpec spec = load_spec(on.omega, on.n);
    const fsph::DeficitReport rep =
        on.n == 2 ? fsph::onofri_deficit_s2(spec) : fsph::paneitz_onofri_deficit_s4(spec);
    exit_code = emit_deficit(rep, on.out, on.path, -rep.deficit, on.tol);
  });

  // -------------------------------------------------------------- defining
  auto* defining = app.add_subcommand(
      "defining", "Solve the adapted boundary defining function and report its bounds");
  struct {
    int n = 0;
    double s = std::nan("");
    double gamma = std::nan("");
    int inner = 1024;
    int boundary = 1024;
    double rstart = 1e-3;
    double rsplit = 2.0 / 3.0;
    double delta = 1e-6;
    std::string config, out = "csv", path;
  } df;
  auto* df_n = defining->add_option("--n", df.n, "boundary sphere dimension");
  auto* df_s = defining->add_option("--s", df.s, "weight exponent s in ((n+1)/2, n)");
  auto* df_g = defining->add_option("--gamma", df.gamma, "alternative to --s: s = n/2 + gamma");
  auto* df_in = defining->add_option("--inner", df.inner, "nodes on [rstart, rsplit]");
  auto* df_bd = defining->add_option("--boundary", df.boundary, "nodes on (rsplit, 1-delta]");
  auto* df_rs = defining->add_option("--rstart", df.rstart, "first radial node");
  auto* df_rp = defining->add_option("--rsplit", df.rsplit, "grid split radius");
  auto* df_dl = defining->add_option("--delta", df.delta, "distance of the last node to 1");
  auto* df_out = defining->add_option("--out", df.out, "output format: csv or json");
  auto* df_path = defining->add_option("--path", df.path, "output file (default stdout)");
  defining->add_option("--config", df.config, "JSON config mirroring the flags");
  defining->callback([&] {
    ConfigLayer cfg;
    cfg.load(df.config);
    cfg.fill(df_n, "n", df.n);
    cfg.fill(df_s, "s", df.s);
    cfg.fill(df_g, "gamma", df.gamma);
    cfg.fill(df_in, "inner", df.inner);
    cfg.fill(df_bd, "boundary", df.boundary);
    cfg.fill(df_rs, "rstart", df.rstart);
    cfg.fill(df_rp, "rsplit", df.rsplit);
    cfg.fill(df_dl, "delta", df.delta);
    cfg.fill(df_out, "out", df.out);
    cfg.fill(df_path, "path", df.path);
    cfg.finish();
    require(df.n != 0, "missing --n");
    const bool have_s = std::isfinite(df.s);
    const bool have_g = std::isfinite(df.gamma);
    require(have_s != have_g, "give exactly one of --s or --gamma");
    const double s = have_s ? df.s : 0.5 * df.n + df.gamma;
    check_out_format(df.out);

    fsph::RadialGridSpec grid;
    grid.n_inner = df.inner;
    grid.n_boundary = df.boundary;
    grid.r_start = df.rstart;
    grid.r_split = df.rsplit;
    grid.delta = df.delta;
    fsph::DefiningFunctionSolution sol = fsph::solve_F(df.n, s, fsph::make_radial_grid(grid));
    fsph::reconstruct(sol);
    const fsph::BoundReport bounds = fsph::verify_lemma_bounds(sol);
    const std::string bounds_json = fsph::bound_report_json(bounds, df.n, s);

    if (df.out == "json") {
      nlohmann::ordered_json merged = nlohmann::ordered_json::parse(bounds_json);
      merged["profile"] =
          nlohmann::ordered_json::parse(fsph::to_json_string(fsph::defining_table(sol)));
      write_text(df.path, merged.dump(2) + "\n");
    } else {
      write_text(df.path, fsph::to_csv(fsph::defining_table(sol)));
      std::fputs(bounds_json.c_str(), stderr);  // keep stdout pure CSV
    }
    if (!bounds.all_pass) {
      std::fprintf(stderr, "invariant failure: pointwise profile bounds violated\n");
      exit_code = kExitInvariant;
    } else {
      exit_code = kExitPass;
    }
  });

  // ---------------------------------------------------------- continuation
  auto* continuation = app.add_subcommand(
      "continuation", "Two-sided sphere/ball families over a grid of orders");
  struct {
    int n = 0;
    std::string omega;
    std::string gammas;
    std::string config, out = "csv", path;
  } ct;
  auto* ct_n = continuation->add_option("--n", ct.n, "sphere dimension (2 or 4)");
  auto* ct_w = continuation->add_option("--omega", ct.omega, "weight: builtin form or JSON file");
  auto* ct_g = continuation->add_option(
      "--gammas", ct.gammas, "comma list or start:end:count[:geometric] range");
  auto* ct_out = continuation->add_option("--out", ct.out, "output format: csv or json");
  auto* ct_path = continuation->add_option("--path", ct.path, "output file (default stdout)");
  continuation->add_option("--config", ct.config, "JSON config mirroring the flags");
  continuation->callback([&] {
    ConfigLayer cfg;
    cfg.load(ct.config);
    cfg.fill(ct_n, "n", ct.n);
    cfg.fill(ct_w, "omega", ct.omega);
    cfg.fill(ct_g, "gammas", ct.gammas);
    cfg.fill(ct_out, "out", ct.out);
    cfg.fill(ct_path, "path", ct.path);
    cfg.finish();
    require(ct.n != 0, "missing --n");
    check_out_format(ct.out);
    const fsph::FunctionSpec spec = load_spec(ct.omega, ct.n);
    const std::vector<double> gammas = parse_gammas(ct.gammas, ct.n);
    const std::vector<fsph::ContinuationRecord> records = fsph::sweep(ct.n, spec, gammas);
    const fsph::CsvTable table = fsph::continuation_table(records);
    write_text(ct.path, ct.out == "json" ? fsph::to_json_string(table) : fsph::to_csv(table));
    exit_code = kExitPass;
    for (const auto& rec : records) {
      if (rec.A > rec.B) {
        std::fprintf(stderr,
                     "invariant failure: sphere quantity exceeds ball bound at gamma = %s\n",
                     fsph::format_full(rec.gamma).c_str());
        exit_code = kExitInvariant;
      }
    }
  });

  // ------------------------------------------------------------ verify-all
  auto* verify = app.add_subcommand(
      "verify-all", "Run the full ten-criterion verification suite");
  struct {
    double tol = 1.0;
    int L = 0;
    unsigned int seed = 20260825;
    std::string config, out = "csv", path;
  } vf;
  auto* vf_tol = verify->add_option("--tol", vf.tol, "tolerance scale (1 = pinned values)");
  auto* vf_L = verify->add_option("--L", vf.L, "band-limit override for sampled checks (0 = defaults)");
  auto* vf_seed = verify->add_option("--seed", vf.seed, "seed for the randomized checks");
  auto* vf_out = verify->add_option("--out", vf.out, "csv for text blocks, json for structured output");
  auto* vf_path = verify->add_option("--path", vf.path, "output file (default stdout)");
  verify->add_option("--config", vf.config, "JSON config mirroring the flags");
  verify->callback([&] {
    ConfigLayer cfg;
    cfg.load(vf.config);
    cfg.fill(vf_tol, "tol", vf.tol);
    cfg.fill(vf_L, "L", vf.L);
    cfg.fill(vf_seed, "seed", vf.seed);
    cfg.fill(vf_out, "out", vf.out);
    cfg.fill(vf_path, "path", vf.path);
    cfg.finish();
    check_out_format(vf.out);
    fsph::VerifyOptions opts;
    opts.tol_scale = vf.tol;
    opts.band_limit = vf.L;
    opts.seed = vf.seed;
    const fsph::VerifySummary summary = fsph::run_all_criteria(opts);

    int passed = 0;
    for (const auto& rep : summary.reports) passed += rep.pass ? 1 : 0;
    if (vf.out == "json") {
      nlohmann::ordered_json criteria = nlohmann::ordered_json::array();
      for (const auto& rep : summary.reports) {
        nlohmann::ordered_json checks = nlohmann::ordered_json::array();
        for (const auto& c : rep.checks) {
          checks.push_back({{"label", c.label},
                            {"measured", c.measured},
                            {"tolerance", c.tolerance},
                            {"pass", c.pass}});
        }
        criteria.push_back({{"index", rep.index},
                            {"title", rep.title},
                            {"pass", rep.pass},
                            {"seconds", rep.seconds},
                            {"checks", checks}});
      }
      nlohmann::ordered_json root{{"criteria", criteria}, {"all_pass", summary.all_pass}};
      write_text(vf.path, root.dump(2) + "\n");
    } else {
      std::string text;
      for (const auto& rep : summary.reports) text += fsph::render_report(rep);
      text += "SUMMARY: " + std::to_string(passed) + "/10 criteria pass\n";
      write_text(vf.path, text);
    }
    for (const auto& rep : summary.reports) {
      if (rep.pass) continue;
      for (const auto& c : rep.checks) {
        if (!c.pass) {
          std::fprintf(stderr, "criterion %d failed: %s (measured %s, tolerance %s)\n",
                       rep.index, c.label.c_str(), fsph::format_full(c.measured).c_str(),
                       fsph::format_full(c.tolerance).c_str());
        }
      }
    }
    exit_code = summary.all_pass ? kExitPass : kExitInvariant;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::runtime_error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNonConvergence;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  }
  return exit_code;
}
