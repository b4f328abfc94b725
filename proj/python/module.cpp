#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "aeroflex/control.hpp"
#include "aeroflex/metrics.hpp"
#include "aeroflex/sim.hpp"
#include "aeroflex/trim.hpp"
#include "aeroflex/turbulence.hpp"

namespace py = pybind11;
using namespace aeroflex;

PYBIND11_MODULE(_aeroflex, m) {
    m.doc() = "flexible-aircraft flight dynamics and load-control core";

    py::class_<AircraftConfig>(m, "AircraftConfig")
        .def_readwrite("name", &AircraftConfig::name)
        .def_readwrite("mass_kg", &AircraftConfig::mass_kg)
        .def_readwrite("span_m", &AircraftConfig::span_m)
        .def_readwrite("wing_area_m2", &AircraftConfig::wing_area_m2)
        .def("n_strips", &AircraftConfig::n_strips);
    m.def("default_aircraft", &default_aircraft);
    m.def("load_config", &load_config);
    m.def("save_config", &save_config);

    py::class_<AircraftModel>(m, "AircraftModel")
        .def_readonly("V_ref", &AircraftModel::V_ref)
        .def_readonly("rho", &AircraftModel::rho)
        .def_property_readonly(
            "wing_A", [](const AircraftModel& a) { return a.wing.A; })
        .def_property_readonly(
            "n_wing_states",
            [](const AircraftModel& a) { return a.wing.n_states(); });
    m.def("build_aircraft", &build_aircraft, py::arg("config"),
          py::arg("V_ref"), py::arg("altitude_m"), py::arg("rigid") = false);

    py::class_<TrimPoint>(m, "TrimPoint")
        .def_readonly("V", &TrimPoint::V)
        .def_readonly("alpha", &TrimPoint::alpha)
        .def_readonly("elevator", &TrimPoint::elevator)
        .def_readonly("thrust", &TrimPoint::thrust)
        .def_readonly("root_loads", &TrimPoint::root_loads)
        .def_readonly("residual", &TrimPoint::residual);
    m.def("trim_aircraft", &trim_aircraft);

    py::class_<LinearModel>(m, "LinearModel")
        .def_readonly("A", &LinearModel::A)
        .def_readonly("B", &LinearModel::B)
        .def_readonly("state_names", &LinearModel::state_names);
    m.def("linearize", &linearize);

    py::class_<ModeInfo>(m, "ModeInfo")
        .def_readonly("omega_n", &ModeInfo::omega_n)
        .def_readonly("zeta", &ModeInfo::zeta)
        .def_readonly("label", &ModeInfo::label)
        .def_readonly("rigid_share", &ModeInfo::rigid_share);
    m.def("modal_analysis", &modal_analysis);

    py::class_<TurbulenceField>(m, "TurbulenceField")
        .def_readonly("nx", &TurbulenceField::nx)
        .def_readonly("ny", &TurbulenceField::ny)
        .def_readonly("spacing_m", &TurbulenceField::spacing_m)
        .def_readonly("sigma_ms", &TurbulenceField::sigma_ms)
        .def_readonly("data", &TurbulenceField::data)
        .def("sample", py::overload_cast<double, double>(
                           &TurbulenceField::sample, py::const_));
    m.def("generate_turbulence", &generate_turbulence);

    py::class_<Scenario>(m, "Scenario")
        .def(py::init<>())
        .def_readwrite("name", &Scenario::name)
        .def_readwrite("duration_s", &Scenario::duration_s)
        .def_readwrite("dt", &Scenario::dt)
        .def_readwrite("V_ref", &Scenario::V_ref)
        .def_readwrite("flexible", &Scenario::flexible)
        .def_readwrite("mla_enabled", &Scenario::mla_enabled);
    m.def("load_scenario", &load_scenario);

    py::class_<SimLog>(m, "SimLog")
        .def_readonly("columns", &SimLog::columns)
        .def_readonly("rows", &SimLog::rows)
        .def("write_csv", &SimLog::write_csv);
    py::class_<SimResult>(m, "SimResult")
        .def_readonly("log", &SimResult::log)
        .def_readonly("alpha_trim", &SimResult::alpha_trim)
        .def_readonly("Mphi_trim", &SimResult::Mphi_trim)
        .def_readonly("diverged", &SimResult::diverged);
    m.def("run_simulation", &run_simulation,
          py::call_guard<py::gil_scoped_release>());
}
