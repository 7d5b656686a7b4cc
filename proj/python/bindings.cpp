// JSON in, JSON out: the Python side owns conversion to Fraction and dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pacnfl/dominance.hpp"
#include "pacnfl/exact.hpp"
#include "pacnfl/pairing.hpp"
#include "pacnfl/runner.hpp"

namespace py = pybind11;
using namespace pacnfl;

namespace {

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::ConfigError, std::string("<input>: ") + e.what());
  }
}

std::string evaluate_config(const std::string& command, const std::string& body, const std::string& base_dir) {
  const auto sub = parse_subcommand(command);
  if (!sub) throw Error(Errc::ConfigError, "command: unknown subcommand '" + command + "'");
  const RunResult r = evaluate(parse_config(*sub, parse(body), base_dir));
  return r.report.dump();
}

std::string run_to(const std::string& command, const std::string& body, const std::string& base_dir,
                   const std::string& out_dir) {
  const auto sub = parse_subcommand(command);
  if (!sub) throw Error(Errc::ConfigError, "command: unknown subcommand '" + command + "'");
  Overrides o;
  o.out = out_dir;
  const RunResult r = run_experiment(parse_config(*sub, parse(body), base_dir, o));
  return r.report.dump();
}

std::string tv_of(const std::string& p, const std::string& q) {
  return rational_json(tv(dist_from_json(parse(p), "p"), dist_from_json(parse(q), "q"))).dump();
}

std::string members(const std::string& spec, std::uint64_t limit) {
  const ClassHandle cls = class_from_json(parse(spec), "class");
  json out = json::array();
  for (const auto& m : cls.enumerate(limit)) out.push_back(member_json(m));
  return out.dump();
}

std::string bound(const std::string& spec, std::uint64_t m, std::uint64_t budget) {
  ExactOptions opt;
  opt.budget = budget;
  return rational_json(symmetrized_lower_bound(class_from_json(parse(spec), "class"), m, opt)).dump();
}

std::string markov(const std::string& mean, const std::string& a) {
  return rational_json(markov_reverse(rational_from_json(parse(mean), "mean"), rational_from_json(parse(a), "a"))).dump();
}

std::string diag(const std::string& tables) {
  const json j = parse(tables);
  if (!j.is_array()) throw Error(Errc::ConfigError, "tables: expected an array");
  std::vector<FunctionTable> ts;
  for (std::size_t i = 0; i < j.size(); ++i) ts.push_back(table_from_json(j[i], "tables[" + std::to_string(i) + "]"));
  return table_json(diagonal(ts)).dump();
}

std::string dominates(const std::string& f, const std::string& g) {
  return certificate_json(dominates_prefix(table_from_json(parse(f), "f"), table_from_json(parse(g), "g"))).dump();
}

}  // namespace

PYBIND11_MODULE(_pacnfl, m) {
  m.doc() = "pacnfl core bindings";
  // message is "<ErrorClass>: <detail>"
  py::register_exception<Error>(m, "PacnflError", PyExc_ValueError);

  m.attr("version") = PACNFL_VERSION;
  m.def("evaluate", &evaluate_config, py::arg("command"), py::arg("body"), py::arg("base_dir") = ".");
  m.def("run_to", &run_to, py::arg("command"), py::arg("body"), py::arg("base_dir"), py::arg("out_dir"));
  m.def("tv", &tv_of);
  m.def("members", &members, py::arg("spec"), py::arg("limit") = kDefaultBudget);
  m.def("symmetrized_lower_bound", &bound, py::arg("spec"), py::arg("m"), py::arg("budget") = kEnumerationBudget);
  m.def("markov_reverse", &markov);
  m.def("diagonal", &diag);
  m.def("dominates", &dominates);
  m.def("subcommands", [] {
    std::vector<std::string> out;
    for (auto n : subcommand_names()) out.emplace_back(n);
    return out;
  });
}
