#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gaffney/boundary.hpp"
#include "gaffney/calculus.hpp"
#include "gaffney/cli.hpp"
#include "gaffney/counterexamples.hpp"
#include "gaffney/expr.hpp"
#include "gaffney/forms.hpp"
#include "gaffney/mesh.hpp"
#include "gaffney/pushforward.hpp"
#include "gaffney/quadratic_forms.hpp"
#include "gaffney/registry.hpp"
#include "gaffney/spectrum.hpp"
#include "gaffney/verification.hpp"

namespace py = pybind11;
using namespace gaffney;

namespace {

Eigen::MatrixXd vertex_matrix(const Mesh& m) {
  Eigen::MatrixXd v(m.vertex_count(), 2);
  for (int i = 0; i < m.vertex_count(); ++i) v.row(i) = m.vertices[i].transpose();
  return v;
}

Eigen::MatrixXi triangle_matrix(const Mesh& m) {
  Eigen::MatrixXi t(m.triangle_count(), 3);
  for (int i = 0; i < m.triangle_count(); ++i)
    for (int j = 0; j < 3; ++j) t(i, j) = m.triangles[i][j];
  return t;
}

py::tuple sparse_coo(const Eigen::SparseMatrix<double>& s) {
  const int nnz = static_cast<int>(s.nonZeros());
  Eigen::VectorXi rows(nnz), cols(nnz);
  Eigen::VectorXd vals(nnz);
  int idx = 0;
  for (int k = 0; k < s.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(s, k); it; ++it) {
      rows[idx] = static_cast<int>(it.row());
      cols[idx] = static_cast<int>(it.col());
      vals[idx] = it.value();
      ++idx;
    }
  }
  return py::make_tuple(rows, cols, vals, py::make_tuple(s.rows(), s.cols()));
}

AnalyticField field_from_expression(const std::string& text) {
  const auto comps = parse_vector_expr(text);
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
  return AnalyticField(2, std::move(fns));
}

BoundarySpec spec_from_json(const std::string& text, const Mesh& m) {
  BoundarySpec spec = BoundarySpec::parse_json(text);
  spec.require_covers(m);
  return spec;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Numerical experiments around the inequality "
            "|grad w|^2 <= C (|curl w|^2 + |div w|^2 + |w|^2)";
  m.attr("__version__") = kVersion;

  py::class_<Edge>(m, "Edge")
      .def_property_readonly("v", [](const Edge& e) { return py::make_tuple(e.v[0], e.v[1]); })
      .def_readonly("tag", &Edge::tag)
      .def_readonly("normal", &Edge::normal)
      .def_readonly("tangent", &Edge::tangent)
      .def_readonly("length", &Edge::length);

  py::class_<Mesh>(m, "Mesh")
      .def_property_readonly("vertices", &vertex_matrix)
      .def_property_readonly("triangles", &triangle_matrix)
      .def_property_readonly("boundary_edges",
                             [](const Mesh& mm) { return mm.boundary_edges; })
      .def_readonly("segment_count", &Mesh::segment_count)
      .def("total_area", &Mesh::total_area)
      .def("boundary_length", &Mesh::boundary_length)
      .def("longest_edge", &Mesh::longest_edge)
      .def("locate", &Mesh::locate)
      .def("to_json", &to_json_string)
      .def_static("from_json", &mesh_from_json_string)
      .def("__repr__", [](const Mesh& mm) {
        return "<Mesh " + std::to_string(mm.vertex_count()) + " vertices, " +
               std::to_string(mm.triangle_count()) + " triangles>";
      });

  m.def("generate_structured_square", &generate_structured_square, py::arg("k"));
  m.def("generate_lshape", &generate_lshape, py::arg("k"));
  m.def("generate_regular_polygon", &generate_regular_polygon, py::arg("sides"),
        py::arg("k"));
  m.def("refine", &refine);
  m.def("make_domain", &make_domain, py::arg("name"), py::arg("k"));
  m.def("validate_mesh", [](const Mesh& mm) {
    py::list out;
    for (const auto& issue : validate(mm))
      out.append(py::make_tuple(issue.code, issue.message));
    return out;
  });

  py::class_<AnalyticField>(m, "Field")
      .def_property_readonly("dimension", &AnalyticField::dimension)
      .def("eval", &AnalyticField::eval, py::arg("x"))
      .def("jacobian", &AnalyticField::jacobian, py::arg("x"));

  m.def("field", &lookup_field, py::arg("name"),
        "Look up a registered analytic field by name");
  m.def("field_from_expression", &field_from_expression, py::arg("expr"),
        "2D field from an expression 'f1,f2' in x1, x2");
  m.def("field_names", &default_field_corpus);
  m.def("intro_family", &intro_family, py::arg("n"));
  m.def("scalar_lambda_family", &scalar_lambda_family, py::arg("n"));
  m.def("harmonic_lambda_field", &harmonic_lambda_field);

  m.def("pointwise_identity_residual",
        [](const AnalyticField& f, const Eigen::VectorXd& x) {
          return pointwise_identity_residual(f, x);
        });
  m.def("div_at", [](const AnalyticField& f, const Eigen::VectorXd& x) {
    return div_at(f, x);
  });
  m.def("curl_at", [](const AnalyticField& f, const Eigen::VectorXd& x) {
    return curl_at(f, x).comp;
  });
  m.def("interpolate", [](const AnalyticField& f, const Mesh& mm) {
    return interpolate(f, mm).dofs();
  });

  py::class_<TwoForm3>(m, "TwoForm")
      .def("d", [](const TwoForm3& w, const Eigen::Vector3d& x) { return d_two_form(w, x); })
      .def("delta", [](const TwoForm3& w, const Eigen::Vector3d& x) {
        return delta_two_form(w, x);
      })
      .def("wedge_dx3", [](const TwoForm3& w, const Eigen::Vector3d& x) {
        return wedge_dx3(w, x);
      });
  m.def("two_form_family", &two_form_family, py::arg("n"), py::arg("sign"));
  m.def("two_form", &lookup_two_form, py::arg("name"));

  py::class_<QuadraticForms>(m, "QuadraticForms")
      .def_readonly("dof_count", &QuadraticForms::dof_count)
      .def("coo", [](const QuadraticForms& q, const std::string& which) {
        if (which == "A") return sparse_coo(q.A);
        if (which == "D") return sparse_coo(q.D);
        if (which == "M") return sparse_coo(q.M);
        if (which == "T") return sparse_coo(q.T);
        throw std::invalid_argument("matrix name must be A, D, M or T");
      })
      .def("quotient", [](const QuadraticForms& q, const Eigen::VectorXd& u) {
        const GaffneyQuotient g = quotient(q, u);
        py::dict out;
        out["grad_energy"] = g.grad_energy;
        out["curl_div_energy"] = g.curl_div_energy;
        out["mass"] = g.mass;
        out["ratio"] = g.ratio;
        return out;
      });
  m.def("assemble", &assemble, py::arg("mesh"));
  m.def("ibp_identity_residual", [](const Mesh& mm, const Eigen::VectorXd& dofs) {
    return ibp_identity_residual(mm, FemField(mm, dofs));
  });

  py::class_<BoundarySpec>(m, "BoundarySpec")
      .def_static("from_json",
                  [](const std::string& text, const Mesh& mm) {
                    return spec_from_json(text, mm);
                  },
                  py::arg("text"), py::arg("mesh"))
      .def_static("uniform",
                  [](const Mesh& mm, const std::string& kind, const std::string& lam) {
                    const BcKind bc = bc_kind_from_string(kind);
                    if (lam.empty()) return BoundarySpec::uniform(mm, bc);
                    return BoundarySpec::uniform(mm, bc, LambdaSpec::parse(lam));
                  },
                  py::arg("mesh"), py::arg("kind"), py::arg("lambda_spec") = "")
      .def("to_json", &BoundarySpec::to_json_string);

  m.def("node_constraints", [](const BoundarySpec& spec, const Mesh& mm) {
    py::list out;
    for (const auto& nc : node_constraints(spec, mm)) {
      py::list basis;
      for (int d = 0; d < nc.dim; ++d) basis.append(nc.basis[d]);
      out.append(py::make_tuple(nc.vertex, nc.dim, basis));
    }
    return out;
  });
  m.def("nullspace_dimension", [](const BoundarySpec& spec, const Mesh& mm) {
    return nullspace_basis(node_constraints(spec, mm), mm).free_count;
  });
  m.def("validate_lambda", [](const BoundarySpec& spec, const Mesh& mm) {
    py::list out;
    for (const auto& row : validate_lambda(spec, mm).rows)
      out.append(py::make_tuple(row.tag, row.min_abs_lambda, row.flagged));
    return out;
  });

  py::class_<GaffneyEstimate>(m, "GaffneyEstimate")
      .def_readonly("level", &GaffneyEstimate::level)
      .def_readonly("h", &GaffneyEstimate::h)
      .def_readonly("free_count", &GaffneyEstimate::free_count)
      .def_readonly("lambda_max", &GaffneyEstimate::lambda_max)
      .def_readonly("eigenfield", &GaffneyEstimate::eigenfield)
      .def_readonly("residual", &GaffneyEstimate::residual)
      .def("__repr__", [](const GaffneyEstimate& e) {
        return "<GaffneyEstimate level=" + std::to_string(e.level) +
               " lambda_max=" + std::to_string(e.lambda_max) + ">";
      });

  m.def("gaffney_constant", &gaffney_constant, py::arg("mesh"), py::arg("spec"));
  m.def("refinement_study", &refinement_study, py::arg("domain"), py::arg("k"),
        py::arg("spec"), py::arg("levels"));
  m.def("solve_gevp", [](const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    const EigenSolution sol = solve_gevp(A, B);
    return py::make_tuple(sol.values, sol.vectors);
  });
  m.def("trace_constant", [](const Mesh& mm, double eps) {
    const TraceEstimate est = trace_constant(mm, eps);
    return py::make_tuple(est.eps, est.c, est.witness);
  });

  m.def("blowup_ratios", [](const std::string& family, const std::string& domain,
                            const std::vector<int>& ns) {
    py::list out;
    for (const auto& row : blowup_ratios(family, domain, ns)) {
      py::dict d;
      d["family"] = row.family;
      d["domain"] = row.domain;
      d["n"] = row.n;
      d["ratio_grad_mass"] = row.ratio_grad_mass;
      d["ratio_gaffney"] = row.ratio_gaffney;
      d["quad_err"] = row.quad_err;
      d["converged"] = row.converged;
      out.append(d);
    }
    return out;
  });

  py::class_<FlowMap>(m, "FlowMap")
      .def_property_readonly("rotation", &FlowMap::rotation)
      .def_property_readonly("radius", &FlowMap::radius)
      .def_property_readonly("step_count", &FlowMap::step_count)
      .def("forward", &FlowMap::forward, py::arg("x"))
      .def("forward_jacobian", &FlowMap::forward_jacobian, py::arg("x"))
      .def("inverse", &FlowMap::inverse, py::arg("y"))
      .def("pushforward_lambda", &FlowMap::pushforward_lambda, py::arg("x"));

  m.def("rectify_flow",
        [](const AnalyticField& lam, const Eigen::VectorXd& x0, double r) {
          return rectify_flow(lam, x0, r);
        },
        py::arg("lambda_field"), py::arg("x0"), py::arg("r"));
  m.def("rectification_residual",
        [](const FlowMap& fm, const AnalyticField& lam,
           const std::vector<Eigen::VectorXd>& pts) {
          return rectification_residual(fm, lam, pts);
        });
  m.def("orthogonal_invariance_residual",
        [](const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
           const AnalyticField& f, const Eigen::VectorXd& u) {
          const auto r = orthogonal_invariance_residual(A, b, f, u);
          return py::make_tuple(r[0], r[1], r[2]);
        });

  m.def("run_verification", [](const std::vector<std::string>& names,
                               std::uint64_t seed) {
    py::list out;
    for (const auto& s : run_verification(names, seed).suites) {
      py::dict d;
      d["name"] = s.name;
      d["max_residual"] = s.max_residual;
      d["threshold"] = s.threshold;
      d["pass"] = s.pass;
      out.append(d);
    }
    return out;
  });
}
