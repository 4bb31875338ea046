#include "gaffney/boundary.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace gaffney {

namespace {

constexpr double kDependenceTol = 1e-10;
constexpr double kLambdaFloor = 1e-8;

Eigen::Vector2d rot90(const Eigen::Vector2d& v) { return {-v.y(), v.x()}; }

}  // namespace

std::string to_string(BcKind kind) {
  switch (kind) {
    case BcKind::Tangential0: return "tangential0";
    case BcKind::Normal0: return "normal0";
    case BcKind::CrossLambda: return "cross_lambda";
    case BcKind::ScalarLambda: return "scalar_lambda";
    case BcKind::Free: return "free";
  }
  return "?";
}

BcKind bc_kind_from_string(const std::string& text) {
  if (text == "tangential0") return BcKind::Tangential0;
  if (text == "normal0") return BcKind::Normal0;
  if (text == "cross_lambda") return BcKind::CrossLambda;
  if (text == "scalar_lambda") return BcKind::ScalarLambda;
  if (text == "free") return BcKind::Free;
  throw std::invalid_argument("unknown boundary condition kind '" + text + "'");
}

LambdaSpec LambdaSpec::nu() {
  LambdaSpec s;
  s.kind_ = Kind::Nu;
  s.source_ = "nu";
  return s;
}

LambdaSpec LambdaSpec::tau() {
  LambdaSpec s;
  s.kind_ = Kind::Tau;
  s.source_ = "tau";
  return s;
}

LambdaSpec LambdaSpec::mix(double theta) {
  LambdaSpec s;
  s.kind_ = Kind::Mix;
  s.theta_ = theta;
  s.source_ = "mix:" + std::to_string(theta);
  return s;
}

LambdaSpec LambdaSpec::expression(const std::string& two_components) {
  LambdaSpec s;
  s.kind_ = Kind::Expr;
  s.expr_ = parse_vector_expr(two_components);
  s.source_ = "expr:" + two_components;
  return s;
}

LambdaSpec LambdaSpec::parse(const std::string& text) {
  if (text == "nu") return nu();
  if (text == "tau") return tau();
  if (text.rfind("mix:", 0) == 0) return mix(std::stod(text.substr(4)));
  if (text.rfind("expr:", 0) == 0) return expression(text.substr(5));
  throw std::invalid_argument("lambda must be 'nu', 'tau', 'mix:<theta>' or 'expr:f1,f2', got '" +
                              text + "'");
}

Eigen::Vector2d LambdaSpec::eval(const Edge& e, const Eigen::Vector2d& x) const {
  switch (kind_) {
    case Kind::Nu: return e.normal;
    case Kind::Tau: return e.tangent;
    case Kind::Mix: return std::cos(theta_) * e.normal + std::sin(theta_) * e.tangent;
    case Kind::Expr:
      return {expr_[0].eval(x.x(), x.y()), expr_[1].eval(x.x(), x.y())};
    case Kind::None: break;
  }
  throw std::logic_error("LambdaSpec: evaluating an empty lambda");
}

BoundarySpec BoundarySpec::uniform(const Mesh& m, BcKind kind, LambdaSpec lambda) {
  if ((kind == BcKind::CrossLambda || kind == BcKind::ScalarLambda) && lambda.empty())
    throw std::invalid_argument("BoundarySpec: this condition kind needs a lambda");
  BoundarySpec spec;
  for (int tag = 1; tag <= m.segment_count; ++tag)
    spec.segments[tag] = SegmentCondition{kind, lambda};
  return spec;
}

BoundarySpec BoundarySpec::parse_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  if (!j.is_object() || !j.contains("segments"))
    throw std::invalid_argument("boundary spec: expected {\"segments\": {...}}");
  for (const auto& [key, value] : j.items()) {
    if (key != "segments")
      throw std::invalid_argument("boundary spec: unknown key '" + key + "'");
    (void)value;
  }
  BoundarySpec spec;
  for (const auto& [tag_text, entry] : j.at("segments").items()) {
    SegmentCondition cond;
    cond.kind = bc_kind_from_string(entry.at("kind").get<std::string>());
    for (const auto& [key, value] : entry.items()) {
      if (key != "kind" && key != "lambda")
        throw std::invalid_argument("boundary spec: unknown key '" + key + "'");
      (void)value;
    }
    const bool needs_lambda =
        cond.kind == BcKind::CrossLambda || cond.kind == BcKind::ScalarLambda;
    if (entry.contains("lambda")) {
      if (!needs_lambda)
        throw std::invalid_argument("boundary spec: lambda given for condition '" +
                                    to_string(cond.kind) + "'");
      cond.lambda = LambdaSpec::parse(entry.at("lambda").get<std::string>());
    } else if (needs_lambda) {
      throw std::invalid_argument("boundary spec: condition '" + to_string(cond.kind) +
                                  "' needs a lambda");
    }
    spec.segments[std::stoi(tag_text)] = cond;
  }
  return spec;
}

std::string BoundarySpec::to_json_string() const {
  nlohmann::json j;
  j["segments"] = nlohmann::json::object();
  for (const auto& [tag, cond] : segments) {
    nlohmann::json entry;
    entry["kind"] = to_string(cond.kind);
    if (!cond.lambda.empty()) entry["lambda"] = cond.lambda.source();
    j["segments"][std::to_string(tag)] = entry;
  }
  return j.dump();
}

const SegmentCondition& BoundarySpec::condition_for(int tag) const {
  const auto it = segments.find(tag);
  if (it == segments.end())
    throw std::invalid_argument("boundary spec: no condition for segment " +
                                std::to_string(tag));
  return it->second;
}

void BoundarySpec::require_covers(const Mesh& m) const {
  for (int tag = 1; tag <= m.segment_count; ++tag) condition_for(tag);
  for (const auto& [tag, cond] : segments) {
    if (tag < 1 || tag > m.segment_count)
      throw std::invalid_argument("boundary spec: segment " + std::to_string(tag) +
                                  " does not exist on this mesh");
    (void)cond;
  }
}

bool LambdaReport::ok() const {
  for (const auto& row : rows)
    if (row.flagged) return false;
  return true;
}

LambdaReport validate_lambda(const BoundarySpec& spec, const Mesh& m) {
  spec.require_covers(m);
  LambdaReport report;
  for (int tag = 1; tag <= m.segment_count; ++tag) {
    const SegmentCondition& cond = spec.condition_for(tag);
    LambdaReportRow row;
    row.tag = tag;
    if (cond.kind == BcKind::Free) {
      row.min_abs_lambda = std::numeric_limits<double>::infinity();
      report.rows.push_back(row);
      continue;
    }
    if (cond.kind == BcKind::Tangential0 || cond.kind == BcKind::Normal0) {
      row.min_abs_lambda = 1.0;  // the implicit lambda is a unit frame vector
      report.rows.push_back(row);
      continue;
    }
    double min_abs = std::numeric_limits<double>::infinity();
    for (const auto& e : m.boundary_edges) {
      if (e.tag != tag) continue;
      const Eigen::Vector2d a = m.vertices[e.v[0]];
      const Eigen::Vector2d b = m.vertices[e.v[1]];
      // endpoints, midpoint and two interior stations per edge
      for (const double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const Eigen::Vector2d x = (1.0 - t) * a + t * b;
        min_abs = std::min(min_abs, cond.lambda.eval(e, x).norm());
      }
    }
    row.min_abs_lambda = min_abs;
    row.flagged = min_abs < kLambdaFloor;
    report.rows.push_back(row);
  }
  return report;
}

namespace {

/// Constraint direction contributed by one edge's condition at point x, or
/// nothing for Free.
bool constraint_direction(const SegmentCondition& cond, const Edge& e,
                          const Eigen::Vector2d& x, Eigen::Vector2d* dir) {
  switch (cond.kind) {
    case BcKind::Free: return false;
    case BcKind::Tangential0: *dir = e.normal; return true;
    case BcKind::Normal0: *dir = e.tangent; return true;
    case BcKind::CrossLambda:
    case BcKind::ScalarLambda: {
      Eigen::Vector2d lam = cond.lambda.eval(e, x);
      const double norm = lam.norm();
      if (norm < 1e-12)
        throw std::invalid_argument("boundary spec: lambda vanishes at (" +
                                    std::to_string(x.x()) + ", " +
                                    std::to_string(x.y()) + ")");
      lam /= norm;
      *dir = cond.kind == BcKind::CrossLambda ? lam : rot90(lam);
      return true;
    }
  }
  return false;
}

}  // namespace

std::vector<NodeConstraint> node_constraints(const BoundarySpec& spec,
                                             const Mesh& m) {
  spec.require_covers(m);
  std::vector<NodeConstraint> constraints(m.vertex_count());
  for (int v = 0; v < m.vertex_count(); ++v) {
    constraints[v].vertex = v;
    constraints[v].dim = 2;
    constraints[v].basis = {Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(0.0, 1.0)};
  }
  for (const auto& e : m.boundary_edges) {
    const SegmentCondition& cond = spec.condition_for(e.tag);
    for (const int v : e.v) {
      Eigen::Vector2d dir;
      if (!constraint_direction(cond, e, m.vertices[v], &dir)) continue;
      NodeConstraint& nc = constraints[v];
      if (nc.dim == 2) {
        nc.dim = 1;
        nc.basis = {dir, Eigen::Vector2d::Zero()};
      } else if (nc.dim == 1) {
        const double det = nc.basis[0].x() * dir.y() - nc.basis[0].y() * dir.x();
        if (std::abs(det) > kDependenceTol) {
          nc.dim = 0;
          nc.basis = {Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero()};
        }
      }
    }
  }
  return constraints;
}

NullspaceBasis nullspace_basis(const std::vector<NodeConstraint>& constraints,
                               const Mesh& m) {
  if (static_cast<int>(constraints.size()) != m.vertex_count())
    throw std::invalid_argument("nullspace_basis: constraints must cover all vertices");
  NullspaceBasis basis;
  int free = 0;
  for (const auto& nc : constraints) free += nc.dim;
  basis.free_count = free;
  basis.Z.resize(m.dof_count(), free);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * free);
  int col = 0;
  for (const auto& nc : constraints) {
    for (int d = 0; d < nc.dim; ++d) {
      const Eigen::Vector2d& b = nc.basis[d];
      if (b.x() != 0.0) triplets.emplace_back(2 * nc.vertex, col, b.x());
      if (b.y() != 0.0) triplets.emplace_back(2 * nc.vertex + 1, col, b.y());
      ++col;
    }
  }
  basis.Z.setFromTriplets(triplets.begin(), triplets.end());
  return basis;
}

}  // namespace gaffney
