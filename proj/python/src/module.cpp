// Copyright 2026 The portalsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "portalsim/net/dns.hpp"
#include "portalsim/scenario/check.hpp"
#include "portalsim/scenario/scenario.hpp"
#include "portalsim/scenario/sequence.hpp"

namespace py = pybind11;
using namespace portalsim;

namespace {

// Exception types live as long as the interpreter.
py::handle scenario_exc;
py::handle decode_exc;

[[noreturn]] void raise_decode(const net::DecodeError& e) {
  PyErr_SetString(decode_exc.ptr(), e.message().c_str());
  throw py::error_already_set();
}

[[noreturn]] void raise_scenario(const scenario::ScenarioError& e) {
  py::object err = scenario_exc(e.message());
  err.attr("code") = e.code;
  err.attr("line") = e.line;
  err.attr("column") = e.column;
  PyErr_SetObject(scenario_exc.ptr(), err.ptr());
  throw py::error_already_set();
}

sim::Trace trace_or_raise(std::string_view text) {
  auto t = sim::parse_trace(text);
  if (!t) throw py::value_error(t.error().message());
  return std::move(t).value();
}

py::dict result_dict(const sim::ActionResult& r) {
  py::dict d;
  d["host"] = r.host;
  d["action"] = r.action;
  d["started"] = r.started;
  d["finished"] = r.finished;
  d["ok"] = r.ok;
  d["error"] = r.error;
  d["redirects"] = r.redirects;
  d["status"] = r.response ? py::cast(r.response->status) : py::none();
  d["body"] = r.response ? py::cast(r.response->body) : py::none();
  d["address"] = r.address ? py::cast(r.address->str()) : py::none();
  return d;
}

}  // namespace

PYBIND11_MODULE(_portalsim, m) {
  m.doc() = "Captive-portal network emulator";

  scenario_exc = py::exception<scenario::ScenarioError>(m, "ScenarioError", PyExc_ValueError).release();
  decode_exc = py::exception<net::DecodeError>(m, "DecodeError", PyExc_ValueError).release();

  py::class_<scenario::Scenario>(m, "Scenario")
      .def_readwrite("budget", &scenario::Scenario::budget)
      .def_property_readonly("technique",
                             [](const scenario::Scenario& s) {
                               return std::string(portal::to_string(s.services.technique));
                             })
      .def_property_readonly("hosts", [](const scenario::Scenario& s) {
        std::vector<std::string> out;
        for (const auto& h : s.topology.hosts) out.push_back(h.name);
        return out;
      });

  m.def(
      "parse_scenario",
      [](const std::string& text) {
        auto s = scenario::parse_scenario(text);
        if (!s) raise_scenario(s.error());
        return std::move(s).value();
      },
      py::arg("text"));
  m.def(
      "load_scenario",
      [](const std::string& path) {
        auto s = scenario::load_scenario(path);
        if (!s) raise_scenario(s.error());
        return std::move(s).value();
      },
      py::arg("path"));

  m.def(
      "run_scenario",
      [](const scenario::Scenario& s, std::optional<sim::Tick> budget) {
        scenario::ScenarioRun r;
        {
          py::gil_scoped_release release;
          r = scenario::run_scenario(s, budget);
        }
        py::dict d;
        d["idle"] = r.run.idle;
        d["now"] = r.run.now;
        d["diagnostic"] = r.run.idle ? std::string() : r.run.diagnostic();
        d["trace"] = r.trace_text;
        py::list results;
        for (const auto& a : r.results) results.append(result_dict(a));
        d["results"] = results;
        return d;
      },
      py::arg("scenario"), py::arg("budget") = py::none());

  m.def(
      "parse_trace",
      [](const std::string& text) {
        py::list out;
        for (const auto& e : trace_or_raise(text)) {
          out.append(py::make_tuple(e.tick, std::string(sim::to_string(e.kind)), e.attrs));
        }
        return out;
      },
      py::arg("text"));

  m.def(
      "compare_traces",
      [](const std::string& golden, const std::string& actual) {
        auto r = scenario::compare_traces(golden, actual);
        py::dict d;
        d["status"] = r.status == scenario::CheckStatus::kIdentical  ? "identical"
                      : r.status == scenario::CheckStatus::kDiffers ? "differs"
                                                                     : "version-mismatch";
        d["line"] = r.line;
        d["expected"] = r.expected;
        d["actual"] = r.actual;
        d["message"] = r.message();
        return d;
      },
      py::arg("golden"), py::arg("actual"));

  m.def(
      "arrow_labels", [](const std::string& text) { return scenario::arrow_labels(trace_or_raise(text)); },
      py::arg("trace"));
  m.def(
      "render_sequence", [](const std::string& text) { return scenario::render_sequence(trace_or_raise(text)); },
      py::arg("trace"));

  // A-record query and response codecs, enough to cross-check the wire form.
  m.def(
      "encode_dns_query",
      [](std::uint16_t id, const std::string& name, bool rd) {
        auto qname = net::DomainName::parse(name);
        if (!qname) raise_decode(qname.error());
        net::DnsMessage msg;
        msg.id = id;
        msg.recursion_desired = rd;
        msg.questions.push_back({*qname});
        auto wire = net::encode_dns(msg);
        if (!wire) raise_decode(wire.error());
        return py::bytes(reinterpret_cast<const char*>(wire->data()), wire->size());
      },
      py::arg("id"), py::arg("name"), py::arg("rd") = false);
  m.def(
      "decode_dns",
      [](const py::bytes& data) {
        const std::string raw = data;
        auto msg = net::decode_dns(net::ByteView(reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size()));
        if (!msg) raise_decode(msg.error());
        py::dict d;
        d["id"] = msg->id;
        d["response"] = msg->qr == net::DnsMessage::Kind::kResponse;
        d["rcode"] = static_cast<int>(msg->rcode);
        py::list qs;
        for (const auto& q : msg->questions) qs.append(py::make_tuple(q.qname.str(), q.qtype, q.qclass));
        d["questions"] = qs;
        py::list as;
        for (const auto& a : msg->answers) {
          py::object addr = py::none();
          if (a.rtype == net::kDnsTypeA && a.rdata.size() == 4) {
            addr = py::cast(std::to_string(a.rdata[0]) + "." + std::to_string(a.rdata[1]) + "." +
                            std::to_string(a.rdata[2]) + "." + std::to_string(a.rdata[3]));
          }
          as.append(py::make_tuple(a.name.str(), a.rtype, a.ttl, addr));
        }
        d["answers"] = as;
        return d;
      },
      py::arg("data"));

  m.attr("TRACE_HEADER") = std::string(sim::kTraceHeader);
  m.attr("SCENARIO_HEADER") = std::string(scenario::kScenarioHeader);
}
