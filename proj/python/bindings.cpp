#include "qrabi/analytic.hpp"
#include "qrabi/error.hpp"
#include "qrabi/model.hpp"
#include "qrabi/observables.hpp"
#include "qrabi/scan.hpp"
#include "qrabi/spectra.hpp"
#include "qrabi/symmetry.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>

namespace py = pybind11;
using namespace qrabi;

namespace {

py::dict record_dict(const GroundRecord& r) {
    py::dict d;
    d["energy"] = r.energy;
    d["gap"] = r.gap;
    d["m_total"] = r.m_total;
    d["m_half"] = r.m_half;
    d["m_stag"] = r.m_stag;
    d["mean_photon"] = r.mean_photon;
    d["n_rescaled"] = r.n_rescaled;
    d["negativity"] = r.negativity;
    d["quad_var_x"] = r.quad_var_x;
    d["sector"] = r.sector;
    return d;
}

py::dict point_dict(const ScanPoint& p) {
    py::dict d = record_dict(p.record);
    d["coord1"] = p.coord1;
    d["coord2"] = p.coord2;
    d["n_max"] = p.n_max;
    d["label"] = p.label;
    d["energy_h3"] = p.energy_h3;
    d["host_block"] = p.host_block;
    d["status"] = p.status;
    d["message"] = p.message;
    return d;
}

Family family_from(const std::string& name) {
    for (const auto& c : ground_candidates())
        if (to_string(c.family) == name) return c.family;
    raise(ErrorCode::UnknownLabel, "unknown family '" + name + "'");
}

GConvention convention_from(const std::string& s) {
    if (s == "reconciled") return GConvention::Reconciled;
    if (s == "printed") return GConvention::Printed;
    raise(ErrorCode::ConfigError, "unknown g convention '" + s + "'");
}

std::vector<double> spectrum(const ModelParams& p, int n_max, const std::string& sector, int levels, double bias) {
    const Truncation t(n_max);
    const SectorLabel label = SectorLabel::parse(sector);
    EigenSet es;
    {
        py::gil_scoped_release release;
        if (label.kind == SectorLabel::Kind::Full) {
            if (bias != 0.0) raise(ErrorCode::ConfigError, "bias applies to sector solves only");
            es = eigh(build_full(p, t));
        } else {
            es = sector_lowest(p, t, sector_basis(label, t, p), levels, bias);
        }
    }
    es.values.resize(std::min<std::size_t>(es.values.size(), static_cast<std::size_t>(std::max(levels, 0))));
    return es.values;
}

py::list scan_points(const ScanResult& r) {
    py::list out;
    for (const ScanPoint& p : r.points) out.append(point_dict(p));
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Two-qutrit quantum Rabi model: Hamiltonians, spectra, phase-diagram and QPT scans";

    static py::exception<Error> error_type(m, "QrabiError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object err = py::handle(error_type)(e.what());
            err.attr("code") = std::string(to_string(e.code()));
            PyErr_SetObject(error_type.ptr(), err.ptr());
        }
    });

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init([](double omega1, double omega2, double gamma_x, double gamma_y, double gamma_z, double omega_mode,
                         double lambda1, double lambda2) {
                 ModelParams p{omega1, omega2, gamma_x, gamma_y, gamma_z, omega_mode, lambda1, lambda2};
                 p.validate();
                 return p;
             }),
             py::kw_only(), py::arg("omega1") = 0.0, py::arg("omega2") = 0.0, py::arg("gamma_x") = 0.0,
             py::arg("gamma_y") = 0.0, py::arg("gamma_z") = 0.0, py::arg("omega_mode") = 1.0, py::arg("lambda1") = 0.0,
             py::arg("lambda2") = 0.0)
        .def_readwrite("omega1", &ModelParams::omega1)
        .def_readwrite("omega2", &ModelParams::omega2)
        .def_readwrite("gamma_x", &ModelParams::gamma_x)
        .def_readwrite("gamma_y", &ModelParams::gamma_y)
        .def_readwrite("gamma_z", &ModelParams::gamma_z)
        .def_readwrite("omega_mode", &ModelParams::omega_mode)
        .def_readwrite("lambda1", &ModelParams::lambda1)
        .def_readwrite("lambda2", &ModelParams::lambda2)
        .def(py::self == py::self)
        .def("__repr__", [](const ModelParams& p) {
            return "ModelParams(omega1=" + std::to_string(p.omega1) + ", omega2=" + std::to_string(p.omega2) +
                   ", gamma_x=" + std::to_string(p.gamma_x) + ", gamma_y=" + std::to_string(p.gamma_y) +
                   ", gamma_z=" + std::to_string(p.gamma_z) + ", omega_mode=" + std::to_string(p.omega_mode) +
                   ", lambda1=" + std::to_string(p.lambda1) + ", lambda2=" + std::to_string(p.lambda2) + ")";
        });

    m.def("preset_level_crossing", py::overload_cast<double, double, double, double>(&preset_level_crossing),
          py::arg("Omega"), py::arg("gamma"), py::arg("lam"), py::arg("omega_mode") = 1.0);
    m.def("preset_qpt", py::overload_cast<double, double, double, double>(&preset_qpt), py::arg("Omega"),
          py::arg("gamma"), py::arg("lam"), py::arg("omega_mode") = 1.0);

    m.def(
        "build_full", [](const ModelParams& p, int n_max) { return build_full(p, Truncation(n_max)).mat(); },
        py::arg("params"), py::arg("n_max"), "Full Hamiltonian as a complex matrix of size 9 (n_max + 1).");
    m.def(
        "build_sector",
        [](const ModelParams& p, int n_max, const std::string& sector, double bias) {
            const Truncation t(n_max);
            return build_sector_block(p, t, sector_basis(SectorLabel::parse(sector), t, p), bias).mat();
        },
        py::arg("params"), py::arg("n_max"), py::arg("sector"), py::arg("bias") = 0.0);
    m.def("spectrum", &spectrum, py::arg("params"), py::arg("n_max"), py::arg("sector") = "full",
          py::arg("levels") = 10, py::arg("bias") = 0.0, "Lowest energies of the full space or one symmetry sector.");
    m.def(
        "ground_energy", [](const ModelParams& p, int n_max) { return ground_energy(p, Truncation(n_max)); },
        py::arg("params"), py::arg("n_max"), py::call_guard<py::gil_scoped_release>());

    m.def(
        "negativity",
        [](const Eigen::MatrixXcd& rho) {
            if (rho.rows() != 9 || rho.cols() != 9) raise(ErrorCode::DimMismatch, "rho must be 9x9");
            return negativity(rho);
        },
        py::arg("rho"));

    m.def("families", [] {
        std::vector<std::string> out;
        for (const auto& c : ground_candidates()) out.emplace_back(to_string(c.family));
        return out;
    });
    m.def(
        "candidate_energy",
        [](const std::string& family, double w, double x) { return candidate_energy(family_from(family), w, x); },
        py::arg("family"), py::arg("omega_over_gamma"), py::arg("x"));
    m.def(
        "ground_family", [](double w, double x) { return std::string(to_string(ground_family(w, x))); },
        py::arg("omega_over_gamma"), py::arg("x"));
    m.def(
        "ground_m", [](double w, double x) { return candidate(ground_family(w, x)).m_total; },
        py::arg("omega_over_gamma"), py::arg("x"));
    m.def("crossing_lines", [] {
        py::list out;
        for (const auto& l : crossing_lines())
            out.append(py::make_tuple(std::string(to_string(l.a)), std::string(to_string(l.b)), l.intercept, l.slope));
        return out;
    });
    m.def("triple_points", [] {
        py::list out;
        for (const auto& tp : triple_points()) out.append(py::make_tuple(tp.omega_over_gamma, tp.x));
        return out;
    });

    m.def(
        "phase_diagram_point",
        [](double w, double x, double omega_over_gamma, int n_max) {
            ScanPoint p;
            {
                py::gil_scoped_release release;
                p = phase_diagram_point(w, x, omega_over_gamma, n_max);
            }
            return point_dict(p);
        },
        py::arg("omega_over_gamma_qutrit"), py::arg("x"), py::arg("omega_over_gamma") = 1.0, py::arg("n_max") = 48);
    m.def(
        "scan_phase_diagram",
        [](std::tuple<double, double, int> w, std::tuple<double, double, int> x, double omega_over_gamma, int n_max,
           int workers) {
            const GridSpec grid = phase_diagram_grid({"Omega/gamma", std::get<0>(w), std::get<1>(w), std::get<2>(w)},
                                                     {"x", std::get<0>(x), std::get<1>(x), std::get<2>(x)},
                                                     omega_over_gamma, n_max);
            ScanResult r;
            {
                py::gil_scoped_release release;
                r = scan_phase_diagram(grid, workers > 0 ? workers : default_workers());
            }
            return scan_points(r);
        },
        py::arg("omega_axis"), py::arg("x_axis"), py::arg("omega_over_gamma") = 1.0, py::arg("n_max") = 48,
        py::arg("workers") = 0, "Axes are (min, max, count); returns one dict per point, row-major.");

    m.def(
        "qpt_point",
        [](double g, double omega_over_gamma, double qutrit_ratio, double bias, const std::string& convention,
           int n_max) {
            QptOptions o{omega_over_gamma, qutrit_ratio, bias, convention_from(convention)};
            const TruncationPolicy policy = n_max > 0 ? TruncationPolicy::fixed(n_max) : TruncationPolicy::adaptive();
            ScanPoint p;
            {
                py::gil_scoped_release release;
                p = qpt_point(g, o, policy);
            }
            return point_dict(p);
        },
        py::arg("g"), py::arg("omega_over_gamma") = 1e-2, py::arg("qutrit_ratio") = 1.0, py::arg("bias") = 1e-8,
        py::arg("convention") = "reconciled", py::arg("n_max") = 0, "n_max = 0 selects the adaptive truncation.");
    m.def(
        "estimate_critical_point",
        [](const std::vector<double>& g, const std::vector<double>& v) { return estimate_critical_point(g, v).g_star; },
        py::arg("g"), py::arg("values"));

    m.def("version", &version);
}
