#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gravchan/channel.hpp"
#include "gravchan/errors.hpp"
#include "gravchan/interferometer.hpp"
#include "gravchan/noise.hpp"
#include "gravchan/optimize.hpp"
#include "gravchan/protocol.hpp"

namespace py = pybind11;
using namespace gravchan;

namespace {

py::list amplitude_list(const PureState& state) {
    py::list out;
    for (const auto& [ket, value] : state.amplitudes()) {
        out.append(py::make_tuple(to_string(ket), value));
    }
    return out;
}

void export_interferometer(py::module_& m) {
    py::class_<GravityModel>(m, "GravityModel")
        .def(py::init<>())
        .def(py::init([](double g0, double gamma) { return GravityModel{g0, gamma}; }),
             py::arg("g0"), py::arg("gamma") = 0.0)
        .def_readwrite("g0", &GravityModel::g0)
        .def_readwrite("gamma", &GravityModel::gamma);

    py::class_<PulseTiming>(m, "PulseTiming")
        .def(py::init<>())
        .def(py::init([](double T, double k) { return PulseTiming{T, k}; }), py::arg("T"),
             py::arg("k"))
        .def_readwrite("T", &PulseTiming::T)
        .def_readwrite("k", &PulseTiming::k);

    py::class_<LaserPhases>(m, "LaserPhases")
        .def(py::init<>())
        .def(py::init([](double a, double b, double c) { return LaserPhases{a, b, c}; }),
             py::arg("phi1"), py::arg("phi2"), py::arg("phi3"))
        .def_readwrite("phi1", &LaserPhases::phi1)
        .def_readwrite("phi2", &LaserPhases::phi2)
        .def_readwrite("phi3", &LaserPhases::phi3);

    py::class_<InterferometerParams>(m, "InterferometerParams")
        .def(py::init<>())
        .def_readwrite("timing", &InterferometerParams::timing)
        .def_readwrite("gravity", &InterferometerParams::gravity)
        .def_readwrite("phases", &InterferometerParams::phases)
        .def_readwrite("gradient_correction", &InterferometerParams::gradient_correction);

    m.def("total_phase",
          py::overload_cast<const PulseTiming&, const GravityModel&, bool>(&total_phase),
          py::arg("timing"), py::arg("gravity"), py::arg("gradient_correction") = false);
    m.def(
        "composite_coefficients",
        [](const LaserPhases& phases, double delta_phi) {
            const auto c = composite_coefficients(phases, delta_phi);
            return py::make_tuple(c.a1, c.a2, c.b1, c.b2);
        },
        py::arg("phases"), py::arg("delta_phi"));
    m.def("ground_probability", &ground_probability, py::arg("delta_phi"));
}

void export_channel(py::module_& m) {
    py::class_<BellChannel>(m, "BellChannel").def(py::init<>());
    py::class_<GeneralChannel>(m, "GeneralChannel")
        .def(py::init([](Complex a, Complex b) { return GeneralChannel{a, b}; }), py::arg("a"),
             py::arg("b"))
        .def_readonly("a", &GeneralChannel::a)
        .def_readonly("b", &GeneralChannel::b);
    py::class_<CatChannel>(m, "CatChannel")
        .def(py::init([](std::size_t atoms) { return CatChannel{atoms}; }), py::arg("atoms"))
        .def_readonly("atoms", &CatChannel::atoms);
    py::class_<ClassicalMixtureChannel>(m, "ClassicalMixtureChannel").def(py::init<>());

    m.def(
        "prepare_bell", [] { return amplitude_list(prepare_bell()); },
        "Cavity-prepared Bell pair as a list of (ket, amplitude).");
    m.def(
        "bell_preparation_fidelity",
        [] { return fidelity(prepare_bell(), std::get<PureState>(make_channel(BellChannel{}))); });
}

void export_protocol(py::module_& m) {
    py::class_<TransferOutcome>(m, "TransferOutcome")
        .def_readonly("p_select", &TransferOutcome::p_select)
        .def_readonly("p_joint_g", &TransferOutcome::p_joint_g)
        .def_readonly("p_joint_e", &TransferOutcome::p_joint_e)
        .def_readonly("p_cond_g", &TransferOutcome::p_cond_g)
        .def_readonly("p_closed_form", &TransferOutcome::p_closed_form)
        .def_readonly("delta_phi_used", &TransferOutcome::delta_phi_used);

    m.def("run_transfer", &run_transfer, py::arg("spec"), py::arg("params"),
          py::arg("remote_atom_index") = 0, py::arg("delta_phi") = py::none());
    m.def(
        "fringe_scan",
        [](const ChannelSpec& spec, const InterferometerParams& params,
           const std::vector<double>& grid, std::size_t remote) {
            std::vector<TransferOutcome> out;
            {
                py::gil_scoped_release release;
                for (const auto& p : fringe_scan(spec, params, grid, remote)) {
                    out.push_back(p.outcome);
                }
            }
            return out;
        },
        py::arg("spec"), py::arg("params"), py::arg("delta_phi_grid"),
        py::arg("remote_atom_index") = 0);
    m.def("direct_measurement", &direct_measurement, py::arg("params"),
          py::arg("delta_phi") = py::none());
    m.def("estimate_phase", &estimate_phase, py::arg("p_observed"), py::arg("amplitude_sq"));
}

void export_noise(py::module_& m) {
    py::class_<NoiseParams>(m, "NoiseParams")
        .def(py::init<>())
        .def_readwrite("n_atoms", &NoiseParams::n_atoms)
        .def_readwrite("c", &NoiseParams::c)
        .def_readwrite("delta_phi_mean", &NoiseParams::delta_phi_mean)
        .def_readwrite("seed", &NoiseParams::seed)
        .def_readwrite("n_runs", &NoiseParams::n_runs)
        .def_readwrite("dominance_weight", &NoiseParams::dominance_weight)
        .def_readwrite("channel_amplitude", &NoiseParams::channel_amplitude);

    py::class_<Estimate>(m, "Estimate")
        .def_readonly("value", &Estimate::value)
        .def_readonly("standard_error", &Estimate::standard_error);

    py::class_<NoiseReport>(m, "NoiseReport")
        .def_readonly("shot_no_channel", &NoiseReport::shot_no_channel)
        .def_readonly("shot_with_channel", &NoiseReport::shot_with_channel)
        .def_readonly("shot_ratio", &NoiseReport::shot_ratio)
        .def_readonly("phase_no_channel", &NoiseReport::phase_no_channel)
        .def_readonly("phase_with_channel", &NoiseReport::phase_with_channel)
        .def_readonly("phase_ratio", &NoiseReport::phase_ratio)
        .def_readonly("mc_shot_no_channel", &NoiseReport::mc_shot_no_channel)
        .def_readonly("mc_shot_with_channel", &NoiseReport::mc_shot_with_channel)
        .def_readonly("mc_phase_ratio", &NoiseReport::mc_phase_ratio)
        .def_readonly("combined_ratio", &NoiseReport::combined_ratio)
        .def_readonly("channel_improves", &NoiseReport::channel_improves);

    py::enum_<ShotNoiseModel>(m, "ShotNoiseModel")
        .value("ATOM_LOSS", ShotNoiseModel::AtomLoss)
        .value("NAIVE", ShotNoiseModel::Naive);

    m.def("shot_noise_closed_form", &shot_noise_closed_form, py::arg("n_atoms"),
          py::arg("with_channel"));
    m.def("phase_noise_closed_form", &phase_noise_closed_form, py::arg("c"),
          py::arg("delta_phi_mean"), py::arg("with_channel"), py::arg("amplitude_a") = py::none());
    m.def("mc_shot_noise", &mc_shot_noise, py::arg("params"), py::arg("with_channel"),
          py::arg("model") = ShotNoiseModel::AtomLoss,
          py::call_guard<py::gil_scoped_release>());
    m.def("mc_phase_noise", &mc_phase_noise, py::arg("params"), py::arg("with_channel"),
          py::arg("amplitude_a") = py::none(), py::call_guard<py::gil_scoped_release>());
    m.def("snr_report", &snr_report, py::arg("params"), py::call_guard<py::gil_scoped_release>());
}

void export_optimize(py::module_& m) {
    py::class_<OptimizationResult>(m, "OptimizationResult")
        .def_readonly("a_star", &OptimizationResult::a_star)
        .def_readonly("b_star", &OptimizationResult::b_star)
        .def_readonly("objective_value", &OptimizationResult::objective_value)
        .def_readonly("iterations", &OptimizationResult::iterations)
        .def_readonly("method", &OptimizationResult::method);

    m.def("outcome_entropy", &outcome_entropy, py::arg("a_abs"), py::arg("delta_phi"));
    m.def("fringe_averaged_entropy", &fringe_averaged_entropy, py::arg("a_abs"),
          py::arg("grid_size") = kDefaultEntropyGrid);
    m.def("optimize_entropy", &optimize_entropy, py::arg("tolerance"),
          py::arg("grid_size") = kDefaultEntropyGrid);
    m.def("png_ratio", &png_ratio, py::arg("a_abs"));
    m.def("png_ratio_extremum", &png_ratio_extremum);
}

}  // namespace

PYBIND11_MODULE(_gravchan, m) {
    m.doc() = "Entangled-atom channel simulator for atom-interferometer phase readout.";

    static py::exception<Error> error(m, "GravchanError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(error, e.what());
        }
    });

    export_interferometer(m);
    export_channel(m);
    export_protocol(m);
    export_noise(m);
    export_optimize(m);
}
