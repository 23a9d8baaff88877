#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cns/blowup.hpp"
#include "cns/dyadic.hpp"
#include "cns/errors.hpp"
#include "cns/grid.hpp"
#include "cns/meyer.hpp"
#include "cns/report.hpp"

namespace py = pybind11;
using namespace cns;

namespace {

py::array_t<double> field_to_array(const SampledField& field) {
  std::vector<py::ssize_t> shape(field.grid.n, field.grid.points_per_side);
  py::array_t<double> out(shape);
  std::copy(field.values.begin(), field.values.end(),
            out.mutable_data());
  return out;
}

WaveletIndex make_index(std::vector<int> eps, int j, std::vector<long long> k) {
  return WaveletIndex(std::move(eps), j, std::move(k));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Tensor Meyer wavelets, dyadic Carleson / Triebel-Lizorkin "
      "functionals, and the explicit norm-inflation field";

  py::class_<meyer::MeyerProfile>(m, "MeyerProfile")
      .def(py::init<int>(), py::arg("transition_order") = 4)
      .def_property_readonly("transition_order",
                             &meyer::MeyerProfile::transition_order)
      .def("transition", &meyer::MeyerProfile::transition)
      .def("psi0", &meyer::MeyerProfile::psi0)
      .def("omega", &meyer::MeyerProfile::omega)
      .def("psi1", &meyer::MeyerProfile::psi1);

  py::class_<WaveletIndex>(m, "WaveletIndex")
      .def(py::init(&make_index), py::arg("eps"), py::arg("j"), py::arg("k"))
      .def_readwrite("eps", &WaveletIndex::eps)
      .def_readwrite("j", &WaveletIndex::j)
      .def_readwrite("k", &WaveletIndex::k);

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init([](int n, double box_side, int points_per_side) {
             GridSpec g{n, box_side, points_per_side};
             g.validate();
             return g;
           }),
           py::arg("n"), py::arg("box_side") = 1.0,
           py::arg("points_per_side") = 256)
      .def_readonly("n", &GridSpec::n)
      .def_readonly("box_side", &GridSpec::box_side)
      .def_readonly("points_per_side", &GridSpec::points_per_side);

  m.def("build_profile", &meyer::build_profile,
        py::arg("transition_order") = 4);
  m.def("phi_hat",
        [](const meyer::MeyerProfile& p, const std::vector<int>& eps,
           const std::vector<double>& xi) { return meyer::phi_hat(p, eps, xi); });
  m.def("periodization_polynomial",
        [](const meyer::MeyerProfile& p, const std::vector<int>& eps) {
          std::vector<std::pair<std::vector<int>, std::complex<double>>> out;
          for (const auto& pt : meyer::periodization_polynomial(p, eps)) {
            out.emplace_back(pt.m, pt.value);
          }
          return out;
        });
  m.def("periodization_sup_norm",
        [](const meyer::MeyerProfile& p, const std::vector<int>& eps) {
          return meyer::periodization_sup_norm(p, eps);
        });
  m.def("inner_product_freq", &meyer::inner_product_freq);
  m.def("sample_wavelet",
        [](const meyer::MeyerProfile& p, const WaveletIndex& idx,
           const GridSpec& g) { return field_to_array(sample_wavelet(p, idx, g)); });
  m.def("min_points_per_side", &min_points_per_side);

  py::class_<dyadic::DyadicCube>(m, "DyadicCube")
      .def(py::init<int, std::vector<long long>>(), py::arg("j"), py::arg("k"))
      .def_readwrite("j", &dyadic::DyadicCube::j)
      .def_readwrite("k", &dyadic::DyadicCube::k)
      .def("side", &dyadic::DyadicCube::side)
      .def("volume", &dyadic::DyadicCube::volume)
      .def("contains", &dyadic::DyadicCube::contains);

  m.def("tl_norm",
        [](int n,
           const std::vector<std::tuple<std::vector<int>, int,
                                        std::vector<long long>, double>>& rows,
           double gamma, double q,
           const std::vector<std::pair<int, std::vector<long long>>>& roots) {
          dyadic::CoefficientField field;
          field.n = n;
          for (const auto& [eps, j, k, value] : rows) {
            field.entries.emplace_back(WaveletIndex(eps, j, k), value);
          }
          std::vector<dyadic::DyadicCube> cubes;
          for (const auto& [j0, k0] : roots) cubes.emplace_back(j0, k0);
          return dyadic::tl_norm(field, dyadic::SpaceParams{gamma, q}, cubes);
        },
        py::arg("n"), py::arg("entries"), py::arg("gamma"), py::arg("q"),
        py::arg("roots"));

  py::class_<blowup::BlowupParams>(m, "BlowupParams")
      .def_readonly("n", &blowup::BlowupParams::n)
      .def_readonly("a", &blowup::BlowupParams::a)
      .def_readonly("b", &blowup::BlowupParams::b);

  m.def("validate_params", &blowup::validate_params, py::arg("n"),
        py::arg("a"), py::arg("b"));
  m.def("coeff", &blowup::coeff, py::arg("params"), py::arg("t"),
        py::arg("j"));
  m.def("bbmo_closed_form",
        [](const blowup::BlowupParams& p, int j0, int m_max) {
          const auto r = blowup::bbmo_closed_form(p, j0, m_max);
          return py::make_tuple(r.value, r.tail_bound);
        },
        py::arg("params"), py::arg("j0"), py::arg("m_max") = 200);
  m.def("blim_closed_form", &blowup::blim_closed_form, py::arg("params"),
        py::arg("t"), py::arg("j0"));
  m.def("blowup_certificate",
        [](const blowup::BlowupParams& p, int m_lo, int m_hi) {
          const auto c = blowup::blowup_certificate(p, m_lo, m_hi);
          py::dict out;
          out["t_values"] = c.t_values;
          out["c_values"] = c.c_values;
          out["fitted_exponent"] = c.fitted_exponent;
          out["expected_exponent"] = c.expected_exponent;
          out["limit_constant"] = c.limit_constant;
          out["accepted"] = c.accepted();
          return out;
        });
  m.def("sup_norm_bound", &blowup::sup_norm_bound);
  m.def("synthesize_u1",
        [](const blowup::BlowupParams& p, const meyer::MeyerProfile& prof,
           double t, const GridSpec& g) {
          return field_to_array(blowup::synthesize_u1(p, prof, t, g));
        });
  m.def("build_u2",
        [](const blowup::BlowupParams& p, const meyer::MeyerProfile& prof,
           double t, const GridSpec& g) {
          return field_to_array(blowup::build_u2(p, prof, t, g));
        });
  m.def("divergence_residual",
        [](const std::vector<py::array_t<double>>& comps, double box_side) {
          if (comps.empty()) throw ParamError("no components");
          std::vector<SampledField> fields;
          for (const auto& arr : comps) {
            SampledField f;
            f.grid.n = static_cast<int>(arr.ndim());
            f.grid.box_side = box_side;
            f.grid.points_per_side = static_cast<int>(arr.shape(0));
            f.values.assign(arr.data(), arr.data() + arr.size());
            fields.push_back(std::move(f));
          }
          return blowup::divergence_residual(fields);
        },
        py::arg("components"), py::arg("box_side") = 1.0);
  m.def("verify",
        [](int n, double a, double b) {
          const auto params = blowup::validate_params(n, a, b);
          const meyer::MeyerProfile profile(4);
          const NormReport report =
              blowup::run_verification(params, profile, {});
          py::dict claims;
          claims["B.BMO"] = report.claim_bbmo ? "pass" : "fail";
          claims["B.lim-fails"] = report.claim_blim_fails ? "pass" : "fail";
          claims["N-infty"] = report.claim_ninfty ? "pass" : "fail";
          claims["div-free"] = report.claim_divfree ? "pass" : "fail";
          py::dict out;
          out["claims"] = claims;
          out["json"] = report.to_json();
          out["divergence_residual"] = report.divergence_residual;
          out["blowup_slope"] = report.blowup_slope;
          return out;
        },
        py::arg("n") = 2, py::arg("a") = 0.25, py::arg("b") = 0.75);

  py::register_exception<ParamError>(m, "ParamError", PyExc_ValueError);
  py::register_exception<NyquistError>(m, "NyquistError", PyExc_ValueError);
  py::register_exception<QuadratureDivergence>(m, "QuadratureDivergence",
                                               PyExc_ArithmeticError);
}
