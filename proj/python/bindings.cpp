#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "acyclify/analysis.hpp"
#include "acyclify/encoder.hpp"
#include "acyclify/formula.hpp"
#include "acyclify/semantics.hpp"

namespace py = pybind11;
using namespace acyclify;

namespace {

Formula parseText(const std::string& text, bool allowConstant) {
  ParseOptions o;
  o.allowConstant = allowConstant;
  o.allowGenerated = true;
  return parse(text, o);
}

TranslationOptions makeOptions(const std::string& mode, const std::string& guard, const std::string& atoms,
                               const std::string& empties) {
  TranslationOptions o;
  if (mode == "prenex") o.pipeline = Pipeline::Prenex;
  else if (mode == "nested") o.pipeline = Pipeline::Nested;
  else if (mode == "nested-agreement") o.pipeline = Pipeline::NestedAgreement;
  else throw py::value_error("unknown mode: " + mode);
  if (guard != "fn" && guard != "size") throw py::value_error("unknown guard: " + guard);
  o.guard = guard == "fn" ? Guard::Fn : Guard::Size;
  if (atoms != "separate" && atoms != "unified") throw py::value_error("unknown atom mode: " + atoms);
  o.atomMode = atoms == "separate" ? AtomMode::Separate : AtomMode::Unified;
  if (empties != "predicate" && empties != "constant") throw py::value_error("unknown reading: " + empties);
  o.emptiesReading = empties == "constant" ? EmptiesReading::Constant : EmptiesReading::Predicate;
  return o;
}

}  // namespace

PYBIND11_MODULE(acyclify, m) {
  m.doc() = "Stratified to acyclic formula translation";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<NotStratified>(m, "NotStratified", PyExc_ValueError);
  py::register_exception<CapExceeded>(m, "CapExceeded", PyExc_RuntimeError);

  m.def("normalize", [](const std::string& text, bool allow_constant) {
    return render(parseText(text, allow_constant));
  }, py::arg("text"), py::arg("allow_constant") = false);

  // {var: type}, or None when the formula is not stratified.
  m.def("stratify", [](const std::string& text) -> py::object {
    const StratResult r = stratify(parseText(text, true));
    if (!isStratified(r)) return py::none();
    py::dict out;
    for (const auto& [v, t] : std::get<Stratification>(r).types) out[py::str(v.name())] = t;
    return out;
  }, py::arg("text"));

  m.def("indices", [](const std::string& text) {
    std::vector<std::string> out;
    for (const Var& v : identityIndices(parseText(text, true)).order) out.push_back(v.name());
    return out;
  }, py::arg("text"));

  m.def("is_acyclic", [](const std::string& text) { return checkAcyclic(parseText(text, true)).acyclic(); },
        py::arg("text"));

  m.def("translate", [](const std::string& text, const std::string& mode, const std::string& guard,
                        const std::string& atoms, const std::string& empties) {
    return render(translate(parseText(text, true), makeOptions(mode, guard, atoms, empties)).output);
  }, py::arg("text"), py::arg("mode") = "prenex", py::arg("guard") = "size", py::arg("atoms") = "unified",
     py::arg("empties") = "predicate");

  m.def("verify", [](const std::string& text, unsigned base_rank, unsigned atoms_count, const std::string& mode,
                     const std::string& guard, const std::string& atoms, const std::string& empties) {
    const Formula f = parseText(text, true);
    const TranslationReport r = translate(f, makeOptions(mode, guard, atoms, empties));
    py::gil_scoped_release release;
    const EquivReport rep = checkEquivalence(f, r.output, hfUniverse(base_rank, atoms_count), r.blocks, r.sourceVars);
    py::gil_scoped_acquire acquire;
    py::dict out;
    out["agree"] = rep.agrees();
    out["assignments"] = rep.verdicts.size();
    out["agreements"] = rep.agreementCount();
    std::vector<std::string> ces;
    for (const auto& v : rep.counterexamples) ces.push_back(v.assignment.str());
    out["counterexamples"] = ces;
    return out;
  }, py::arg("text"), py::arg("base_rank") = 3, py::arg("atoms_count") = 0, py::arg("mode") = "prenex",
     py::arg("guard") = "size", py::arg("atoms") = "unified", py::arg("empties") = "predicate");

  m.def("evaluate", [](const std::string& text, const std::string& assignment, unsigned base_rank,
                       unsigned atoms_count) {
    return eval(parseText(text, true), hfUniverse(base_rank, atoms_count), parseAssignment(assignment));
  }, py::arg("text"), py::arg("assignment"), py::arg("base_rank") = 3, py::arg("atoms_count") = 0);

  m.def("hf_universe", [](unsigned max_rank, unsigned atom_count) {
    const Universe u = hfUniverse(max_rank, atom_count);
    std::vector<std::string> out;
    for (HFSet x : u.elements()) out.push_back(x.str());
    return out;
  }, py::arg("max_rank"), py::arg("atom_count") = 0);
}
