#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "guardsim/oracle.hpp"
#include "guardsim/scenario.hpp"

namespace py = pybind11;
using namespace guardsim;

namespace {

py::dict snapshot_dict(const MetricsSnapshot& s) {
    py::dict d;
    d["time"] = s.time;
    d["cell"] = s.cell ? py::object(py::int_(*s.cell)) : py::object(py::str("all"));
    d["Oc"] = s.Oc;
    d["GCh"] = s.GCh;
    d["Nc"] = s.Nc;
    d["Hc"] = s.Hc;
    d["Rn"] = s.Rn;
    d["Rh"] = s.Rh;
    d["H"] = s.H;
    d["Pb"] = s.Pb;
    d["Ph"] = s.Ph;
    d["utilization"] = s.utilization;
    return d;
}

py::list summary_list(const std::vector<ReplicationResult>& results) {
    py::list out;
    for (const auto& r : summarize(results)) {
        py::dict d;
        d["replicate"] = r.replicate;
        d["policy"] = r.policy;
        d["Nc"] = r.Nc;
        d["Hc"] = r.Hc;
        d["Rn"] = r.Rn;
        d["Rh"] = r.Rh;
        d["H"] = r.H;
        d["Pb"] = r.Pb;
        d["Ph"] = r.Ph;
        d["utilization"] = r.utilization;
        d["final_GCh"] = r.final_GCh;
        out.append(d);
    }
    return out;
}

Scenario scenario_from(const std::string& json_text, std::optional<std::uint64_t> seed) {
    Scenario sc = parse_scenario(json_text);
    if (seed) sc.sim.seed = *seed;
    return sc;
}

}  // namespace

PYBIND11_MODULE(_guardsim, m) {
    m.doc() = "Guard-channel admission control simulator";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

    py::enum_<PolicyKind>(m, "PolicyKind")
        .value("FCA", PolicyKind::FCA)
        .value("StaticGuard", PolicyKind::StaticGuard)
        .value("ACAS", PolicyKind::ACAS);
    py::enum_<Decision>(m, "Decision").value("Admit", Decision::Admit).value("Reject", Decision::Reject);
    py::enum_<AdaptationRule>(m, "AdaptationRule")
        .value("None_", AdaptationRule::None)
        .value("Increment", AdaptationRule::Increment)
        .value("Decrement", AdaptationRule::Decrement);

    py::class_<PolicyParams>(m, "PolicyParams")
        .def(py::init<>())
        .def_readwrite("kind", &PolicyParams::kind)
        .def_readwrite("C", &PolicyParams::capacity)
        .def_readwrite("GCh0", &PolicyParams::initial_guard)
        .def_readwrite("Th", &PolicyParams::threshold)
        .def_readwrite("A_u", &PolicyParams::increase_factor)
        .def_readwrite("A_d", &PolicyParams::decrease_factor)
        .def_readwrite("N", &PolicyParams::consecutive_calls)
        .def_readwrite("Cmin", &PolicyParams::guard_min)
        .def_readwrite("Cmax", &PolicyParams::guard_max)
        .def_readwrite("t", &PolicyParams::window_s)
        .def("validate", &PolicyParams::validate);

    py::class_<AdaptationReport>(m, "AdaptationReport")
        .def_readonly("old_guard", &AdaptationReport::old_guard)
        .def_readonly("new_guard", &AdaptationReport::new_guard)
        .def_readonly("rule", &AdaptationReport::rule);

    py::class_<PolicyState>(m, "PolicyState")
        .def(py::init<const PolicyParams&>())
        .def("admit_new", &PolicyState::admit_new, py::arg("occupancy"))
        .def("admit_handoff", &PolicyState::admit_handoff, py::arg("occupancy"))
        .def("on_handoff_event", &PolicyState::on_handoff_event, py::arg("outcome"))
        .def("on_measure_tick", &PolicyState::on_measure_tick)
        .def_property_readonly("guard", &PolicyState::guard)
        .def_property_readonly("window_rejected", &PolicyState::window_rejected)
        .def_property_readonly("window_handoffs", &PolicyState::window_handoffs)
        .def_property_readonly("streak", &PolicyState::streak);

    py::class_<OracleResult>(m, "OracleResult")
        .def_readonly("state_probs", &OracleResult::state_probs)
        .def_readonly("Pb", &OracleResult::Pb)
        .def_readonly("Ph", &OracleResult::Ph);

    m.def("erlang_b", &erlang_b, py::arg("C"), py::arg("a"));
    m.def("guard_channel_stationary", &guard_channel_stationary, py::arg("C"), py::arg("GCh"),
          py::arg("lambda_n"), py::arg("lambda_h"), py::arg("mu"));

    m.def(
        "run",
        [](const std::string& config_json, std::optional<std::uint64_t> seed) {
            const Scenario sc = scenario_from(config_json, seed);
            std::vector<ReplicationResult> results;
            {
                py::gil_scoped_release release;
                results = run_replications(sc.sim, sc.replications, replication_threads());
            }
            py::list series;
            for (const auto& s : results.front().timeseries) series.append(snapshot_dict(s));
            py::dict out;
            out["summary"] = summary_list(results);
            out["timeseries"] = series;
            out["total"] = snapshot_dict(results.front().result.total);
            return out;
        },
        py::arg("config_json"), py::arg("seed") = py::none(),
        "Run a scenario given as JSON text; returns summary rows, replicate-0 time series and totals.");

    m.def(
        "compare",
        [](const std::string& config_json, std::optional<std::uint64_t> seed) {
            const Scenario sc = scenario_from(config_json, seed);
            std::vector<ReplicationResult> results;
            {
                py::gil_scoped_release release;
                results = run_comparison(sc, replication_threads());
            }
            std::ostringstream csv;
            write_timeseries_csv(csv, results);
            py::dict out;
            out["summary"] = summary_list(results);
            out["timeseries_csv"] = csv.str();
            return out;
        },
        py::arg("config_json"), py::arg("seed") = py::none(),
        "Run FCA, static guard and ACAS on identical traffic.");
}
