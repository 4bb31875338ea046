#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "gaffney/expr.hpp"
#include "gaffney/mesh.hpp"

namespace gaffney {

enum class BcKind { Tangential0, Normal0, CrossLambda, ScalarLambda, Free };

std::string to_string(BcKind kind);
BcKind bc_kind_from_string(const std::string& text);

/// Lambda attached to a segment: the edge frame vectors ("nu", "tau"), a
/// fixed in-frame rotation ("mix:<theta>" gives cos(theta) nu + sin(theta) tau),
/// or a coordinate expression ("expr:f1,f2").
class LambdaSpec {
 public:
  LambdaSpec() = default;
  static LambdaSpec nu();
  static LambdaSpec tau();
  static LambdaSpec mix(double theta);
  static LambdaSpec expression(const std::string& two_components);
  static LambdaSpec parse(const std::string& text);

  Eigen::Vector2d eval(const Edge& e, const Eigen::Vector2d& x) const;
  const std::string& source() const { return source_; }
  bool empty() const { return kind_ == Kind::None; }

 private:
  enum class Kind { None, Nu, Tau, Mix, Expr };
  Kind kind_ = Kind::None;
  double theta_ = 0.0;
  std::array<Expr, 2> expr_;
  std::string source_;
};

struct SegmentCondition {
  BcKind kind = BcKind::Free;
  LambdaSpec lambda;  ///< used by CrossLambda and ScalarLambda only
};

/// Per-segment boundary conditions keyed by segment tag.
struct BoundarySpec {
  std::map<int, SegmentCondition> segments;

  static BoundarySpec uniform(const Mesh& m, BcKind kind,
                              LambdaSpec lambda = LambdaSpec());
  static BoundarySpec parse_json(const std::string& text);
  std::string to_json_string() const;

  const SegmentCondition& condition_for(int tag) const;
  /// Throws unless every segment tag of the mesh has exactly one condition.
  void require_covers(const Mesh& m) const;
};

struct LambdaReportRow {
  int tag = 0;
  double min_abs_lambda = 0.0;
  bool flagged = false;
};

struct LambdaReport {
  std::vector<LambdaReportRow> rows;
  bool ok() const;
};

/// Reports min |lambda| per segment over the boundary quadrature points;
/// flags segments where it drops below 1e-8. Diagnostics only.
LambdaReport validate_lambda(const BoundarySpec& spec, const Mesh& m);

/// Admissible subspace of a nodal value. dim = 2 leaves the node free,
/// dim = 1 pins it to a line, dim = 0 forces omega = 0 there.
struct NodeConstraint {
  int vertex = -1;
  int dim = 2;
  std::array<Eigen::Vector2d, 2> basis{Eigen::Vector2d::Zero(),
                                       Eigen::Vector2d::Zero()};
};

/// Nodal enforcement of the boundary conditions. At a vertex shared by two
/// segments the directions u, v merge when |det(u|v)| <= 1e-10 and pin the
/// node to zero otherwise; Free combined with anything keeps the non-free
/// constraint alone.
std::vector<NodeConstraint> node_constraints(const BoundarySpec& spec,
                                             const Mesh& m);

/// Sparse basis of the admissible discrete subspace: each node contributes
/// its admissible basis vectors as columns, so Z^T Z = I exactly.
struct NullspaceBasis {
  Eigen::SparseMatrix<double> Z;  ///< 2V x F
  int free_count = 0;
};

NullspaceBasis nullspace_basis(const std::vector<NodeConstraint>& constraints,
                               const Mesh& m);

}  // namespace gaffney
