#include "bsar/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "bsar/error.hpp"
#include "bsar/microlocal.hpp"
#include "bsar/parallel.hpp"
#include "bsar/scene_io.hpp"
#include "bsar/transform.hpp"

namespace bsar {

namespace {

using nlohmann::json;

constexpr int kPredictSamples = 33;

struct Options {
  std::string command;
  std::string config;
  std::string out;
  std::string in;
  std::string phantom;
  std::string filter;
  std::string spotlight;
  double margin = 0.05;
  std::string suite = "all";
  std::string x;
  std::string xi;
  std::optional<double> s;
  std::string manifest;
  std::string pgm;
  std::string csv;
  int threads = 0;
  bool serial = false;
};

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  std::string text(buf);
  if (text[0] == '-' && text.find_first_not_of("-0.") == std::string::npos) text.erase(0, 1);
  return text;
}

Point2 parse_pair(const std::string& text, const char* what) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw ConfigError(std::string(what) + " must be given as a,b");
  }
  try {
    std::size_t used1 = 0, used2 = 0;
    const std::string a = text.substr(0, comma), b = text.substr(comma + 1);
    const double v1 = std::stod(a, &used1);
    const double v2 = std::stod(b, &used2);
    if (used1 != a.size() || used2 != b.size()) throw std::invalid_argument(what);
    return {v1, v2};
  } catch (const std::logic_error&) {
    throw ConfigError(std::string(what) + " must be given as a,b");
  }
}

Half parse_half(const std::string& text) {
  if (text == "upper") return Half::upper;
  if (text == "lower") return Half::lower;
  throw ConfigError("--spotlight must be upper or lower");
}

std::string point_text(Point2 p, int digits = 4) {
  return "(" + fixed(p.x1, digits) + ", " + fixed(p.x2, digits) + ")";
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path + "'");
}

class Runner {
 public:
  Runner(const Options& o, const RunConfig& rc, const CliContext& ctx)
      : o_(o), rc_(rc), ctx_(ctx), threads_(o.serial ? 1 : resolve_threads(o.threads)) {}

  int run() {
    const auto& c = o_.command;
    if (c == "simulate") return simulate();
    if (c == "backproject") return backproject();
    if (c == "normal") return normal_cmd();
    if (c == "predict") return predict();
    if (c == "geometry") return geometry();
    if (c == "validate") return validate();
    throw ConfigError("unknown command '" + c + "'");
  }

  std::vector<std::string> inputs;
  std::vector<std::string> outputs;

 private:
  std::ostream& out() { return *ctx_.out; }

  BistaticOperator make_operator() const {
    return BistaticOperator(rc_.acq, rc_.selection(), rc_.grid,
                            rc_.operator_options(threads_));
  }

  void require(const std::string& value, const char* flag) const {
    if (value.empty()) throw ConfigError(std::string(flag) + " is required for " + o_.command);
  }

  bool dt2() const {
    if (o_.filter.empty()) return false;
    if (o_.filter == "dt2") return true;
    throw ConfigError("--filter accepts only dt2");
  }

  template <class Array>
  void exports(const Array& a) {
    if (!o_.pgm.empty()) {
      export_pgm(a, o_.pgm, Normalization::absmax);
      outputs.push_back(o_.pgm);
    }
    if (!o_.csv.empty()) {
      export_csv(a, o_.csv);
      outputs.push_back(o_.csv);
    }
  }

  int simulate() {
    require(o_.out, "--out");
    const auto op = make_operator();
    const Image img = build_phantom(parse_phantom(o_.phantom), rc_.grid);
    const Sinogram d = o_.spotlight.empty()
                           ? op.forward(img)
                           : forward_spotlight(op, img, parse_half(o_.spotlight), o_.margin);
    save_sinogram(o_.out, d, rc_.acq, op.selection());
    outputs.push_back(o_.out);
    exports(d);
    return kExitOk;
  }

  int backproject() {
    require(o_.out, "--out");
    require(o_.in, "--in");
    Sinogram d = load_sinogram(o_.in);
    inputs.push_back(o_.in);
    if (!(d.grid == rc_.grid)) {
      throw GridMismatch("sinogram grid in '" + o_.in + "' differs from the configuration");
    }
    const auto op = make_operator();
    if (dt2()) d = apply_dt2(d);
    Image u = op.adjoint(d);
    if (!o_.spotlight.empty()) u = spotlight_mask(u, parse_half(o_.spotlight), o_.margin);
    save_image(o_.out, u, rc_.acq, op.selection());
    outputs.push_back(o_.out);
    exports(u);
    return kExitOk;
  }

  int normal_cmd() {
    require(o_.out, "--out");
    const auto op = make_operator();
    const Image img = build_phantom(parse_phantom(o_.phantom), rc_.grid);
    const Image u = o_.spotlight.empty()
                        ? op.normal(img, dt2())
                        : normal_spotlight(op, img, parse_half(o_.spotlight), o_.margin, dt2());
    save_image(o_.out, u, rc_.acq, op.selection());
    outputs.push_back(o_.out);
    exports(u);
    return kExitOk;
  }

  void emit(const std::string& text) {
    out() << text;
    if (!o_.out.empty()) {
      write_text(o_.out, text);
      outputs.push_back(o_.out);
    }
  }

  int predict() {
    require(o_.x, "--x");
    const auto& a = rc_.acq;
    const Point2 x = parse_pair(o_.x, "--x");
    CovectorPoint q{x, 0.0, 0.0};
    if (!o_.xi.empty()) {
      const Point2 xi = parse_pair(o_.xi, "--xi");
      q.xi1 = xi.x1;
      q.xi2 = xi.x2;
    } else {
      const double s_mid = 0.5 * (a.s_min + a.s_max);
      q = canonical_image(a, {o_.s.value_or(s_mid), x.x1, x.x2, 1.0}).second;
    }
    std::ostringstream os;
    auto cov = [&](const CovectorPoint& c) {
      return point_text(c.x) + " xi=" + point_text({c.xi1, c.xi2});
    };
    os << "C1: " << cov(predict_c1(q)) << "\n";
    if (a.common_midpoint()) {
      const auto cm = predict_common_midpoint(a, q);
      os << "Lambda2: " << cov(cm.lambda2) << "\n";
      os << "Lambda3: " << cov(cm.lambda3) << "\n";
    } else if (a.alpha < 0.0) {
      auto row = [&](const C2Partners& p) {
        if (p.points.empty()) return std::string("none");
        std::string r;
        for (std::size_t i = 0; i < p.points.size(); ++i) {
          if (i) r += ", ";
          r += point_text(p.points[i]);
        }
        return r;
      };
      if (o_.s) {
        os << "C2: " << row(predict_c2_partners(a, *o_.s, x)) << "\n";
      } else {
        for (int i = 0; i < kPredictSamples; ++i) {
          const double s = a.s_min + (a.s_max - a.s_min) * i / (kPredictSamples - 1);
          os << "C2 s=" << fixed(s, 4) << ": ";
          os << (s > a.s0() ? row(predict_c2_partners(a, s, x)) : "none (s <= s0)") << "\n";
        }
      }
    }
    emit(os.str());
    return kExitOk;
  }

  int geometry() {
    const auto& a = rc_.acq;
    const double s = o_.s.value_or(0.5 * (a.s_min + a.s_max));
    std::ostringstream os;
    os << "alpha: " << format_double(a.alpha) << "\n";
    os << "h: " << format_double(a.h) << "\n";
    os << "s: " << fixed(s) << "\n";
    os << "ground threshold: " << fixed(ground_threshold(a, s)) << "\n";
    if (!(a.alpha < 0.0)) {
      os << "Sigma2: empty for alpha>=0\n";
      emit(os.str());
      return kExitOk;
    }
    os << "s0: " << fixed(a.s0()) << "\n";
    if (a.common_midpoint()) {
      os << "Sigma2: vertical line x1=0 (common midpoint)\n";
      os << "t_minus/t_plus: undefined in common-midpoint mode\n";
      emit(os.str());
      return kExitOk;
    }
    const auto c = sigma2_circle(a, s);
    if (c.kind != PencilKind::circle || !(s > a.s0())) {
      os << "Sigma2: empty (s <= s0)\n";
      os << "t_minus/t_plus: undefined (s <= s0)\n";
      os << "x1_minus/x1_plus: undefined (s <= s0)\n";
      os << "k0: undefined (s <= s0)\n";
      os << "region at s: O1 for every t\n";
    } else {
      const auto [tm, tp] = critical_times(a, s);
      const auto [xm, xp] = avoided_points(a, s);
      os << "Sigma2: center=" << point_text({c.center_x1, 0.0}, 6)
         << " radius=" << fixed(c.radius) << "\n";
      os << "t_minus: " << fixed(tm) << "\n";
      os << "t_plus: " << fixed(tp) << "\n";
      os << "x1_minus: " << fixed(xm) << "\n";
      os << "x1_plus: " << fixed(xp) << "\n";
      os << "k0: " << fixed(k0(a, s)) << "\n";
      os << "region at s: O3 for t < " << fixed(tm) << ", O2 for " << fixed(tm)
         << " < t < " << fixed(tp) << ", O3 for t > " << fixed(tp) << "\n";
    }
    emit(os.str());
    return kExitOk;
  }

  int validate() {
    const auto results = run_validation(rc_, o_.suite, ctx_.hooks, threads_);
    emit(format_report(results));
    for (const auto& r : results) {
      if (!r.passed) return kExitValidation;
    }
    return kExitOk;
  }

  const Options& o_;
  const RunConfig& rc_;
  const CliContext& ctx_;
  int threads_;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "configuration file (key=value)")->required();
  sub->add_option("--out", o.out, "output path");
  sub->add_option("--threads", o.threads, "worker threads, 0 = all cores");
  sub->add_flag("--serial", o.serial, "single worker");
}

void add_imaging(CLI::App* sub, Options& o) {
  sub->add_option("--spotlight", o.spotlight, "illuminated half-plane: upper|lower");
  sub->add_option("--margin", o.margin, "spotlight distance from the flight track");
  sub->add_option("--pgm", o.pgm, "also export a 16-bit PGM");
  sub->add_option("--csv", o.csv, "also export CSV");
}

int execute(const std::vector<std::string>& args,
            const std::optional<std::string>& config_text, const CliContext& ctx);

int replay(const Options& o, const CliContext& ctx) {
  std::ifstream in(o.manifest);
  if (!in) throw IoError("cannot read manifest '" + o.manifest + "'");
  json m;
  try {
    m = json::parse(in);
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed manifest: ") + e.what());
  }
  std::vector<std::string> args = m.at("args").get<std::vector<std::string>>();
  if (!o.out.empty()) {
    bool replaced = false;
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
      if (args[i] == "--out") {
        args[i + 1] = o.out;
        replaced = true;
      }
    }
    if (!replaced) {
      args.push_back("--out");
      args.push_back(o.out);
    }
  }
  return execute(args, m.at("config_text").get<std::string>(), ctx);
}

int execute(const std::vector<std::string>& args,
            const std::optional<std::string>& config_text, const CliContext& ctx) {
  Options o;
  CLI::App app{"Bistatic SAR simulation and artifact analysis"};
  app.require_subcommand(1);

  auto* sim = app.add_subcommand("simulate", "forward-model a phantom into a sinogram");
  add_common(sim, o);
  add_imaging(sim, o);
  sim->add_option("--phantom", o.phantom, "e.g. point(2,1);disk(0,3,0.5)")->required();

  auto* bp = app.add_subcommand("backproject", "adjoint of the forward model");
  add_common(bp, o);
  add_imaging(bp, o);
  bp->add_option("--in", o.in, "sinogram dataset")->required();
  bp->add_option("--filter", o.filter, "dt2: second t-derivative before backprojection");

  auto* nm = app.add_subcommand("normal", "backprojection of simulated data");
  add_common(nm, o);
  add_imaging(nm, o);
  nm->add_option("--phantom", o.phantom, "phantom description")->required();
  nm->add_option("--filter", o.filter, "dt2: second t-derivative between the operators");

  auto* pr = app.add_subcommand("predict", "artifact partners of a scene covector");
  add_common(pr, o);
  pr->add_option("--x", o.x, "ground point x1,x2")->required();
  pr->add_option("--xi", o.xi, "covector xi1,xi2 (default: grad of travel time)");
  pr->add_option("--s", o.s, "single slow time for C2 partners");

  auto* geo = app.add_subcommand("geometry", "critical geometry at one slow time");
  add_common(geo, o);
  geo->add_option("--s", o.s, "slow time (default: aperture centre)");

  auto* val = app.add_subcommand("validate", "run invariant suites");
  add_common(val, o);
  val->add_option("--suite", o.suite, "geometry|operators|microlocal|all");

  auto* rep = app.add_subcommand("replay", "re-run a command from its manifest");
  rep->add_option("--manifest", o.manifest, "manifest written by an earlier run")->required();
  rep->add_option("--out", o.out, "write the primary output here instead");

  std::vector<std::string> argv_store{"bsar"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    *ctx.out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    *ctx.out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    *ctx.err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  o.command = app.get_subcommands().front()->get_name();
  if (o.command == "replay") return replay(o, ctx);

  const auto start = std::chrono::steady_clock::now();
  std::string text;
  if (config_text) {
    text = *config_text;
  } else {
    std::ifstream in(o.config, std::ios::binary);
    if (!in) throw IoError("cannot read config '" + o.config + "'");
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  const RunConfig rc = parse_config(text);
  Runner runner(o, rc, ctx);
  const int code = runner.run();
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (!runner.outputs.empty()) {
    json m;
    m["tool"] = "bsar";
    m["command"] = o.command;
    m["args"] = args;
    m["config_path"] = o.config;
    m["config_text"] = text;
    m["resolved_config"] = render_config(rc);
    m["inputs"] = runner.inputs;
    m["outputs"] = runner.outputs;
    m["seed"] = rc.seed;
    m["threads"] = o.serial ? 1 : resolve_threads(o.threads);
    m["serial"] = o.serial;
    m["wall_clock_seconds"] = elapsed;
    m["exit_code"] = code;
    write_text(manifest_path(runner.outputs.front()), m.dump(2) + "\n");
  }
  return code;
}

}  // namespace

std::string manifest_path(const std::string& output) { return output + ".manifest.json"; }

int run_cli(const std::vector<std::string>& args, const CliContext& ctx_in) {
  CliContext ctx = ctx_in;
  if (!ctx.out) ctx.out = &std::cout;
  if (!ctx.err) ctx.err = &std::cerr;
  try {
    return execute(args, std::nullopt, ctx);
  } catch (const IoError& e) {
    *ctx.err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    *ctx.err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    *ctx.err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    *ctx.err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace bsar
