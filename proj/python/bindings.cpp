// Python bindings for the catbell core: closed-form correlators, the
// Fock-matrix oracle, grid scans and the violation search.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "catbell/analytic.hpp"
#include "catbell/fock.hpp"
#include "catbell/optimize.hpp"
#include "catbell/scan.hpp"
#include "catbell/verify.hpp"

namespace py = pybind11;
using namespace catbell;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Bell-CHSH correlator toolkit for two-mode entangled cat states";

    py::register_exception<DegenerateStateError>(m, "DegenerateStateError", PyExc_ValueError);
    py::register_exception<CutoffTooSmallError>(m, "CutoffTooSmallError", PyExc_ValueError);
    py::register_exception<DimensionMismatchError>(m, "DimensionMismatchError", PyExc_ValueError);
    py::register_exception<TsirelsonViolationError>(m, "TsirelsonViolationError",
                                                    PyExc_RuntimeError);
    py::register_exception<DegenerateRegionError>(m, "DegenerateRegionError", PyExc_ValueError);
    py::register_exception<CertificationError>(m, "CertificationError", PyExc_RuntimeError);

    m.attr("TSIRELSON_BOUND") = kTsirelsonBound;

    py::enum_<Mode>(m, "Mode").value("A", Mode::A).value("B", Mode::B);
    py::enum_<Classification>(m, "Classification")
        .value("CLASSICAL", Classification::Classical)
        .value("VIOLATING", Classification::Violating);

    py::class_<CatStateParams>(m, "CatStateParams")
        .def_readonly("sigma", &CatStateParams::sigma)
        .def_readonly("eta", &CatStateParams::eta)
        .def_readonly("phi", &CatStateParams::phi)
        .def_readonly("norm_factor", &CatStateParams::norm_factor)
        .def("__repr__", [](const CatStateParams& s) {
            std::ostringstream os;
            os << "CatStateParams(sigma=" << s.sigma.real() << '+' << s.sigma.imag()
               << "j, eta=" << s.eta.real() << '+' << s.eta.imag() << "j, phi=" << s.phi << ')';
            return os.str();
        });

    py::class_<MeasurementSettings>(m, "MeasurementSettings")
        .def(py::init([](Amplitude z, Amplitude zp, Amplitude w, Amplitude wp) {
                 return MeasurementSettings{z, zp, w, wp};
             }),
             py::arg("z"), py::arg("z_prime"), py::arg("w"), py::arg("w_prime"))
        .def_readwrite("z", &MeasurementSettings::z)
        .def_readwrite("z_prime", &MeasurementSettings::z_prime)
        .def_readwrite("w", &MeasurementSettings::w)
        .def_readwrite("w_prime", &MeasurementSettings::w_prime);

    py::class_<ChshValue>(m, "ChshValue")
        .def_readonly("value", &ChshValue::value)
        .def_readonly("classification", &ChshValue::classification)
        .def("violating", &ChshValue::violating);

    m.def("coherent_overlap", &coherent_overlap, py::arg("u"), py::arg("v"));
    m.def(
        "weyl_compose",
        [](Amplitude xi, Amplitude xi2) {
            const WeylComposition c = weyl_compose(xi, xi2);
            return py::make_tuple(c.phase, c.total);
        },
        py::arg("xi"), py::arg("xi2"));
    m.def("make_cat_state", &make_cat_state, py::arg("sigma"), py::arg("eta"), py::arg("phi"));
    m.def("projector_expectation", &projector_expectation, py::arg("z"), py::arg("state"),
          py::arg("mode"));
    m.def("joint_projector_expectation", &joint_projector_expectation, py::arg("z"), py::arg("w"),
          py::arg("state"));
    m.def(
        "correlator",
        [](Amplitude z, Amplitude w, const CatStateParams& state) {
            return correlator(z, w, state).value;
        },
        py::arg("z"), py::arg("w"), py::arg("state"));
    m.def("chsh", &chsh, py::arg("settings"), py::arg("state"));

    // Fock-matrix oracle; matrices and vectors cross to numpy.
    m.def("min_cutoff", &min_cutoff, py::arg("magnitude"));
    m.def("reliable_dim", &reliable_dim, py::arg("cutoff"), py::arg("magnitude"));
    m.def(
        "displacement_matrix",
        [](Amplitude alpha, int cutoff) { return build_displacement(alpha, cutoff).matrix; },
        py::arg("alpha"), py::arg("cutoff"));
    m.def(
        "coherent_state",
        [](Amplitude alpha, int cutoff) { return coherent_state(alpha, cutoff).amplitudes; },
        py::arg("alpha"), py::arg("cutoff"));
    m.def(
        "dichotomic_matrix",
        [](Amplitude z, int cutoff, Mode mode) { return build_dichotomic(z, cutoff, mode).matrix; },
        py::arg("z"), py::arg("cutoff"), py::arg("mode"));
    m.def(
        "cat_state_vector",
        [](const CatStateParams& state, int cutoff) {
            return build_cat_state(state, cutoff).amplitudes;
        },
        py::arg("state"), py::arg("cutoff"));
    m.def("oracle_correlator", &oracle_correlator, py::arg("z"), py::arg("w"), py::arg("state"),
          py::arg("cutoff"));
    m.def("oracle_chsh", &oracle_chsh, py::arg("settings"), py::arg("state"), py::arg("cutoff"));

    py::class_<ScanRecord>(m, "ScanRecord")
        .def_readonly("alpha", &ScanRecord::alpha)
        .def_readonly("omega", &ScanRecord::omega)
        .def_readonly("e_zw", &ScanRecord::e_zw)
        .def_readonly("e_zpw", &ScanRecord::e_zpw)
        .def_readonly("e_zwp", &ScanRecord::e_zwp)
        .def_readonly("e_zpwp", &ScanRecord::e_zpwp)
        .def_readonly("chsh", &ScanRecord::chsh)
        .def_readonly("classification", &ScanRecord::classification);

    m.def(
        "run_scan",
        [](double alpha_min, double alpha_max, int alpha_steps, double omega_min, double omega_max,
           int omega_steps, const MeasurementSettings& settings, double phi, int workers) {
            ScanGrid grid{{alpha_min, alpha_max, alpha_steps},
                          {omega_min, omega_max, omega_steps},
                          settings,
                          phi};
            const ScanResult r = run_scan(grid, workers);
            return py::make_tuple(r.records, r.skipped);
        },
        py::arg("alpha_min"), py::arg("alpha_max"), py::arg("alpha_steps"), py::arg("omega_min"),
        py::arg("omega_max"), py::arg("omega_steps"), py::arg("settings"), py::arg("phi"),
        py::arg("workers") = 1);

    py::class_<OptimizationResult>(m, "OptimizationResult")
        .def_readonly("best_value", &OptimizationResult::best_value)
        .def_readonly("best_settings", &OptimizationResult::best_settings)
        .def_readonly("best_state", &OptimizationResult::best_state)
        .def_readonly("evaluations_used", &OptimizationResult::evaluations_used)
        .def_readonly("seed", &OptimizationResult::seed)
        .def_readonly("trace", &OptimizationResult::trace);

    m.def(
        "maximize_violation",
        [](long budget, int restarts, std::uint64_t seed, int workers) {
            return maximize_violation(reference_problem(budget, restarts, seed), workers);
        },
        py::arg("budget") = 200000, py::arg("restarts") = 64, py::arg("seed") = 1,
        py::arg("workers") = 1,
        "Run the documented free-state search: real sigma, eta in [0.3, 2.5], phi = pi, "
        "settings bounded by |Re|, |Im| <= 3.");
    m.def(
        "maximize_violation_fixed_state",
        [](const CatStateParams& state, double settings_box, long budget, int restarts,
           std::uint64_t seed, int workers) {
            return maximize_violation(
                fixed_state_problem(state, settings_box, budget, restarts, seed), workers);
        },
        py::arg("state"), py::arg("settings_box") = 3.0, py::arg("budget") = 20000,
        py::arg("restarts") = 8, py::arg("seed") = 0, py::arg("workers") = 1);
}
