#include "gaffney/cli.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "gaffney/boundary.hpp"
#include "gaffney/counterexamples.hpp"
#include "gaffney/expr.hpp"
#include "gaffney/mesh.hpp"
#include "gaffney/pushforward.hpp"
#include "gaffney/registry.hpp"
#include "gaffney/spectrum.hpp"
#include "gaffney/verification.hpp"

namespace gaffney {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_header(std::ostream& os, std::uint64_t seed) {
  os << "# gaffney-lab v" << kVersion << " seed=" << seed << "\n";
}

/// Output sink: the configured file when set, otherwise the stream.
class Sink {
 public:
  Sink(const JobConfig& cfg, std::ostream& fallback) : stream_(&fallback) {
    if (!cfg.out.empty()) {
      file_.open(cfg.out);
      if (!file_) throw std::invalid_argument("cannot open '" + cfg.out + "' for writing");
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

BoundarySpec load_spec(const JobConfig& cfg, const Mesh& m) {
  if (cfg.spec.empty())
    throw std::invalid_argument("this command needs a boundary spec (--spec)");
  std::string text = cfg.spec;
  if (text.find('{') == std::string::npos) {
    std::ifstream in(text);
    if (!in) throw std::invalid_argument("cannot open spec file '" + text + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  BoundarySpec spec = BoundarySpec::parse_json(text);
  spec.require_covers(m);
  return spec;
}

}  // namespace

JobConfig JobConfig::from_json_string(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  JobConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "command") cfg.command = value.get<std::string>();
    else if (key == "domain") cfg.domain = value.get<std::string>();
    else if (key == "k") cfg.k = value.get<int>();
    else if (key == "levels") cfg.levels = value.get<int>();
    else if (key == "spec") cfg.spec = value.is_string() ? value.get<std::string>() : value.dump();
    else if (key == "family") cfg.family = value.get<std::string>();
    else if (key == "ns") cfg.ns = value.get<std::vector<int>>();
    else if (key == "lambda") cfg.lambda = value.get<std::string>();
    else if (key == "x0") {
      if (!value.is_array() || value.size() != 2)
        throw std::invalid_argument("config: x0 must be [x1, x2]");
      cfg.x0[0] = value.at(0).get<double>();
      cfg.x0[1] = value.at(1).get<double>();
    } else if (key == "r") cfg.r = value.get<double>();
    else if (key == "eps") cfg.eps = value.get<double>();
    else if (key == "grid") cfg.grid = value.get<int>();
    else if (key == "out") cfg.out = value.get<std::string>();
    else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
    else if (key == "fields") {
      cfg.fields = value.get<std::vector<std::string>>();
      cfg.fields_given = true;
    } else throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  return cfg;
}

JobConfig JobConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_string(ss.str());
}

int cmd_constant(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const Mesh base = make_domain(cfg.domain, cfg.k);
    const BoundarySpec spec = load_spec(cfg, base);
    const LambdaReport lambda_report = validate_lambda(spec, base);
    if (!lambda_report.ok()) {
      for (const auto& row : lambda_report.rows)
        if (row.flagged)
          err << "segment " << row.tag << ": min |lambda| = " << row.min_abs_lambda
              << " below 1e-8\n";
      return kInvalidInput;
    }
    const auto rows = refinement_study(cfg.domain, cfg.k, spec, cfg.levels);
    Sink sink(cfg, out);
    write_header(sink.get(), cfg.seed);
    sink.get() << "level,h,F,lambda_max,residual\n";
    for (const auto& est : rows)
      sink.get() << est.level << "," << fmt17(est.h) << "," << est.free_count << ","
                 << fmt17(est.lambda_max) << "," << fmt17(est.residual) << "\n";
    return kOk;
  } catch (const std::invalid_argument& e) {
    err << "constant: " << e.what() << "\n";
    return kInvalidInput;
  }
}

int cmd_verify(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  const bool explicit_selection = cfg.fields_given || !cfg.fields.empty();
  const std::vector<std::string> names =
      explicit_selection ? cfg.fields : default_field_corpus();
  if (names.empty()) {
    err << "verify: empty corpus selection\n";
    return kInvalidInput;
  }
  try {
    for (const auto& name : names) lookup_field(name);  // validate upfront
    const VerifyReport report = run_verification(names, cfg.seed);
    Sink sink(cfg, out);
    write_header(sink.get(), cfg.seed);
    sink.get() << "suite,max_residual,threshold,status,detail\n";
    for (const auto& s : report.suites)
      sink.get() << s.name << "," << fmt17(s.max_residual) << "," << fmt17(s.threshold)
                 << "," << (s.pass ? "pass" : "FAIL") << "," << s.detail << "\n";
    return report.all_pass() ? kOk : kSuiteFailure;
  } catch (const std::invalid_argument& e) {
    err << "verify: " << e.what() << "\n";
    return kInvalidInput;
  }
}

int cmd_blowup(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.family.empty()) throw std::invalid_argument("missing family name");
    std::string domain = cfg.domain;
    if (cfg.family != "intro_family" && cfg.family != "harmonic_lambda")
      domain = "cube";  // 3D families integrate over the unit cube
    const auto rows = blowup_ratios(cfg.family, domain, cfg.ns);
    Sink sink(cfg, out);
    write_header(sink.get(), cfg.seed);
    sink.get() << "family,domain,n,ratio_grad_mass,ratio_gaffney,quad_err\n";
    for (const auto& row : rows) {
      sink.get() << row.family << "," << row.domain << "," << row.n << ","
                 << fmt17(row.ratio_grad_mass) << "," << fmt17(row.ratio_gaffney) << ","
                 << fmt17(row.quad_err);
      if (!row.converged) sink.get() << ",quadrature-not-converged";
      sink.get() << "\n";
    }
    return kOk;
  } catch (const std::invalid_argument& e) {
    err << "blowup: " << e.what() << "\n";
    return kInvalidInput;
  }
}

int cmd_rectify(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.lambda.empty()) throw std::invalid_argument("missing lambda expression");
    const auto comps = parse_vector_expr(cfg.lambda);
    std::vector<ScalarFunction> fns(2);
    for (int i = 0; i < 2; ++i) {
      const Expr f = comps[i];
      const Expr d1 = f.derivative(1);
      const Expr d2 = f.derivative(2);
      fns[i].value = [f](const Eigen::VectorXd& x) { return f.eval(x[0], x[1]); };
      fns[i].gradient = [d1, d2](const Eigen::VectorXd& x) {
        return Eigen::Vector2d(d1.eval(x[0], x[1]), d2.eval(x[0], x[1])).eval();
      };
    }
    const AnalyticField lambda(2, std::move(fns));
    const Eigen::Vector2d x0(cfg.x0[0], cfg.x0[1]);
    if (lambda.eval(x0).norm() < 1e-14)
      throw std::invalid_argument("lambda vanishes at x0");
    const FlowMap fm = rectify_flow(lambda, x0, cfg.r);
    Sink sink(cfg, out);
    write_header(sink.get(), cfg.seed);
    sink.get() << "x1,x2,residual\n";
    const int g = std::max(2, cfg.grid);
    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(2);
    e1[0] = 1.0;
    for (int i = 0; i < g; ++i) {
      for (int j = 0; j < g; ++j) {
        Eigen::VectorXd p(2);
        p[0] = -cfg.r + 2.0 * cfg.r * i / (g - 1);
        p[1] = -cfg.r + 2.0 * cfg.r * j / (g - 1);
        const double res = (fm.pushforward_lambda(p) - e1).norm();
        sink.get() << fmt17(p[0]) << "," << fmt17(p[1]) << "," << fmt17(res) << "\n";
      }
    }
    return kOk;
  } catch (const std::invalid_argument& e) {
    err << "rectify: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::runtime_error& e) {
    err << "rectify: " << e.what() << "\n";
    return kSuiteFailure;
  }
}

int cmd_mesh(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const Mesh m = make_domain(cfg.domain, cfg.k);
    const auto issues = validate(m);
    if (!issues.empty()) {
      for (const auto& issue : issues)
        err << issue.code << ": " << issue.message << "\n";
      return kSuiteFailure;
    }
    Sink sink(cfg, out);
    sink.get() << to_json_string(m) << "\n";
    return kOk;
  } catch (const std::invalid_argument& e) {
    err << "mesh: " << e.what() << "\n";
    return kInvalidInput;
  }
}

int cmd_trace(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (!(cfg.eps > 0.0)) throw std::invalid_argument("eps must be positive");
    Mesh m = make_domain(cfg.domain, cfg.k);
    Sink sink(cfg, out);
    write_header(sink.get(), cfg.seed);
    sink.get() << "level,h,eps,c\n";
    for (int level = 1; level <= cfg.levels; ++level) {
      const TraceEstimate est = trace_constant(m, cfg.eps);
      sink.get() << level << "," << fmt17(m.longest_edge()) << "," << fmt17(est.eps)
                 << "," << fmt17(est.c) << "\n";
      if (level < cfg.levels) m = refine(m);
    }
    return kOk;
  } catch (const std::invalid_argument& e) {
    err << "trace: " << e.what() << "\n";
    return kInvalidInput;
  }
}

int run_command(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.command == "constant") return cmd_constant(cfg, out, err);
  if (cfg.command == "verify") return cmd_verify(cfg, out, err);
  if (cfg.command == "blowup") return cmd_blowup(cfg, out, err);
  if (cfg.command == "rectify") return cmd_rectify(cfg, out, err);
  if (cfg.command == "mesh") return cmd_mesh(cfg, out, err);
  if (cfg.command == "trace") return cmd_trace(cfg, out, err);
  err << "unknown command '" << cfg.command << "'\n";
  return kInvalidInput;
}

}  // namespace gaffney
