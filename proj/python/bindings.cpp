// SPDX-License-Identifier: Apache-2.0
//
// beamlab - robust adaptive beamforming via preprocessing-based spatial sampling
// Copyright (C) 2026 The beamlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "beamlab/analysis.hpp"
#include "beamlab/beamforming.hpp"
#include "beamlab/covariance.hpp"
#include "beamlab/experiment.hpp"
#include "beamlab/ppbss.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace beamlab;

namespace
{

HermitianMatrix herm(const CMatrix &m) { return HermitianMatrix(m); }

ScenarioTruth realize(const ScenarioSpec &spec, std::uint64_t seed, std::uint64_t trial)
{
    RandomStream rng = RandomStream::for_trial(seed, trial, StreamId::mismatch);
    return realize_scenario(spec, rng);
}

py::dict diagnostics_dict(const PpbssDiagnostics &d)
{
    py::dict out;
    std::vector<double> doas;
    for (const auto &t : d.tracking.tracks)
        doas.push_back(t.mean_estimate());
    out["estimated_doas_deg"] = doas;
    out["coarse_doas_deg"] = d.tracking.coarse_deg;
    out["mu_hat"] = d.stats.mu_hat;
    out["zeta_hat"] = d.stats.zeta_hat;
    out["eta_tilde"] = d.stats.eta_tilde;
    out["rho_tilde"] = d.stats.rho_tilde;
    out["c_rank"] = d.c_rank;
    out["kappa"] = d.power.eigenvalue;
    out["power_iterations"] = d.power.iterations;
    out["preprocessing"] = d.preprocessing.matrix();
    out["reconstructed_ipnc"] = d.reconstructed_ipnc.matrix();
    out["soi_covariance"] = d.soi_covariance.matrix();
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "beamlab core bindings";

    // Message is "<code>: <text>" so callers can branch on the code.
    static py::exception<Error> exc(m, "BeamlabError");
    py::register_exception_translator([](std::exception_ptr p) {
        try
        {
            if (p)
                std::rethrow_exception(p);
        }
        catch (const Error &e)
        {
            PyErr_SetString(exc.ptr(), (std::string(to_string(e.code())) + ": " + e.what()).c_str());
        }
    });

    py::class_<ArrayGeometry>(m, "ArrayGeometry")
        .def(py::init<std::vector<double>>(), py::arg("positions"))
        .def_static("uniform_linear", &ArrayGeometry::uniform_linear, py::arg("elements"), py::arg("spacing") = 0.5)
        .def_property_readonly("positions", &ArrayGeometry::positions)
        .def_property_readonly("element_count", &ArrayGeometry::element_count);

    py::class_<ScenarioSpec>(m, "ScenarioSpec")
        .def(py::init<>())
        .def_readwrite("geometry", &ScenarioSpec::geometry)
        .def_readwrite("soi_doa_deg", &ScenarioSpec::soi_doa_deg)
        .def_readwrite("snr_db", &ScenarioSpec::snr_db)
        .def_readwrite("interferer_doas_deg", &ScenarioSpec::interferer_doas_deg)
        .def_readwrite("inr_db", &ScenarioSpec::inr_db)
        .def_readwrite("noise_power", &ScenarioSpec::noise_power)
        .def_readwrite("snapshots", &ScenarioSpec::snapshots)
        .def_property(
            "mismatch", [](const ScenarioSpec &s) { return std::string(to_string(s.mismatch.kind)); },
            [](ScenarioSpec &s, const std::string &k) { s.mismatch.kind = mismatch_kind_from_string(k); });

    py::class_<ScenarioTruth>(m, "ScenarioTruth")
        .def_readonly("geometry", &ScenarioTruth::geometry)
        .def_readonly("soi_power", &ScenarioTruth::soi_power)
        .def_readonly("interferer_powers", &ScenarioTruth::interferer_powers)
        .def_readonly("noise_power", &ScenarioTruth::noise_power)
        .def_readonly("snapshots", &ScenarioTruth::snapshots)
        .def_readonly("actual_soi_doa_deg", &ScenarioTruth::actual_soi_doa_deg)
        .def_readonly("actual_interferer_doas_deg", &ScenarioTruth::actual_interferer_doas_deg)
        .def_readonly("soi_sv", &ScenarioTruth::soi_sv)
        .def_readonly("interferer_svs", &ScenarioTruth::interferer_svs);

    m.def("steering_vector", &steering_vector, py::arg("theta_deg"), py::arg("geometry"));
    m.def("realize_scenario", &realize, py::arg("spec"), py::arg("seed") = 1, py::arg("trial") = 0);
    m.def(
        "generate_snapshots",
        [](const ScenarioTruth &truth, std::uint64_t seed, std::uint64_t trial) {
            RandomStream rng = RandomStream::for_trial(seed, trial, StreamId::snapshots);
            return CMatrix(generate_snapshots(truth, rng).data());
        },
        py::arg("truth"), py::arg("seed") = 1, py::arg("trial") = 0);

    m.def("sample_covariance", [](const CMatrix &x) { return CMatrix(sample_covariance(SnapshotSet(x)).matrix()); },
          py::arg("snapshots"));
    m.def("theoretical_ipnc", [](const ScenarioTruth &t) { return CMatrix(theoretical_ipnc(t).matrix()); });
    m.def("pearson_correlation", [](const CMatrix &a, const CMatrix &b) { return pearson_correlation(a, b); });

    m.def(
        "coarse_doas_dft",
        [](const CVector &x, std::optional<std::size_t> count) { return coarse_doas_dft(x, count); },
        py::arg("snapshot"), py::arg("count") = py::none());
    m.def("fine_doa", &fine_doa, py::arg("snapshot"), py::arg("geometry"), py::arg("coarse_deg"),
          py::arg("half_width_deg") = 5.0, py::arg("step_deg") = 0.1);

    m.def("zeta_estimate", [](const CMatrix &x) {
        const SnapshotSet s(x);
        return zeta_estimate(s, sample_covariance(s));
    });
    m.def(
        "closed_form_shrinkage",
        [](const CMatrix &target, double zeta) {
            const auto o = closed_form_shrinkage(herm(target), zeta);
            return py::make_tuple(o.eta, o.rho);
        },
        py::arg("target"), py::arg("zeta"));

    m.def(
        "power_method",
        [](const CMatrix &r, const CVector &b0, double tol, int max_it) {
            const auto p = power_method(herm(r), b0, tol, max_it);
            return py::make_tuple(p.eigenvalue, p.eigenvector, p.iterations);
        },
        py::arg("r"), py::arg("b0"), py::arg("tol") = 1e-3, py::arg("max_iterations") = 50);

    m.def("mvdr_weight", [](const CMatrix &r, const CVector &a) { return mvdr_weight(herm(r), a); });
    m.def("output_sinr_db", &output_sinr_db, py::arg("w"), py::arg("truth"));
    m.def("optimal_sinr_db", &optimal_sinr_db, py::arg("truth"));
    m.def("beampattern", &beampattern, py::arg("w"), py::arg("grid_deg"), py::arg("geometry"));
    m.def(
        "approx_beampattern",
        [](const CMatrix &c, double eta, double rho, const CVector &a_s, const std::vector<double> &grid,
           const ArrayGeometry &g) {
            const auto ap = approx_beampattern(herm(c), eta, rho, a_s, grid, g);
            return py::make_tuple(ap.values, ap.extrapolated);
        },
        py::arg("c"), py::arg("eta"), py::arg("rho"), py::arg("soi_sv"), py::arg("grid_deg"), py::arg("geometry"));

    m.def(
        "ppbss_beamformer",
        [](const CMatrix &x, const ArrayGeometry &g) {
            const auto r = ppbss_beamformer(SnapshotSet(x), g);
            py::dict out = diagnostics_dict(*r.diagnostics);
            out["weights"] = r.weights;
            out["soi_sv"] = r.soi_sv_used;
            return out;
        },
        py::arg("snapshots"), py::arg("geometry"));

    m.def(
        "crb_doa",
        [](const ScenarioTruth &t, std::optional<CMatrix> source_cov) {
            return crb_doa(t, source_cov ? *source_cov : source_theoretical_covariance(t)).crb_deg2;
        },
        py::arg("truth"), py::arg("source_covariance") = py::none());

    m.def("preset_names", &preset_names);
    m.def(
        "run_preset",
        [](const std::string &name, const std::filesystem::path &out, std::optional<int> trials,
           std::optional<std::uint64_t> seed) {
            ExperimentConfig c = make_preset(name);
            c.output_dir = out;
            if (trials)
                c.trials = *trials;
            if (seed)
                c.seed = *seed;
            SweepResult r;
            {
                py::gil_scoped_release release;
                r = run_sweep(c);
            }
            py::list agg;
            for (const auto &a : r.aggregate)
            {
                py::dict d;
                d["sweep_value"] = a.sweep_value;
                d["method"] = std::string(to_string(a.method));
                d["mean_sinr_db"] = a.mean_sinr_db;
                d["trials_used"] = a.trials_used;
                d["excluded"] = a.excluded;
                agg.append(d);
            }
            py::dict res;
            res["files"] = r.files;
            res["aggregate"] = agg;
            return res;
        },
        py::arg("name"), py::arg("output_dir"), py::arg("trials") = py::none(), py::arg("seed") = py::none());
}
