#include "acyclify/formula_json.hpp"

namespace acyclify {

nlohmann::json toJson(const Formula& f) {
  nlohmann::json j;
  j["op"] = opName(f.op());
  switch (f.op()) {
    case Op::Mem:
    case Op::Eq:
      j["lhs"] = f.lhs().name();
      j["rhs"] = f.rhs().name();
      break;
    case Op::EqConst:
      j["lhs"] = f.lhs().name();
      j["rhs"] = "0";
      break;
    case Op::Not:
      j["body"] = toJson(f.body());
      break;
    case Op::And:
    case Op::Or:
    case Op::Implies:
      j["lhs"] = toJson(f.left());
      j["rhs"] = toJson(f.right());
      break;
    case Op::Exists:
    case Op::Forall:
      j["var"] = f.var().name();
      j["body"] = toJson(f.body());
      break;
  }
  return j;
}

namespace {

Var token(const nlohmann::json& j, const char* key, const ParseOptions& options) {
  // Route tokens through the surface parser's variable rules.
  const std::string name = j.at(key).get<std::string>();
  Formula probe = parse(name + " = " + name, options);
  return probe.lhs();
}

}  // namespace

Formula fromJson(const nlohmann::json& j, const ParseOptions& options) {
  const std::string op = j.at("op").get<std::string>();
  if (op == "mem") return Formula::mem(token(j, "lhs", options), token(j, "rhs", options));
  if (op == "eq") return Formula::eq(token(j, "lhs", options), token(j, "rhs", options));
  if (op == "eqconst") {
    if (!options.allowConstant) throw std::invalid_argument("constant '0' is not enabled");
    if (j.at("rhs").get<std::string>() != "0") throw std::invalid_argument("eqconst rhs must be \"0\"");
    return Formula::eqConst(token(j, "lhs", options));
  }
  if (op == "not") return Formula::negate(fromJson(j.at("body"), options));
  if (op == "and") return Formula::conj(fromJson(j.at("lhs"), options), fromJson(j.at("rhs"), options));
  if (op == "or") return Formula::disj(fromJson(j.at("lhs"), options), fromJson(j.at("rhs"), options));
  if (op == "implies") return Formula::implies(fromJson(j.at("lhs"), options), fromJson(j.at("rhs"), options));
  if (op == "exists") return Formula::exists(token(j, "var", options), fromJson(j.at("body"), options));
  if (op == "forall") return Formula::forall(token(j, "var", options), fromJson(j.at("body"), options));
  throw std::invalid_argument("unknown op '" + op + "'");
}

}  // namespace acyclify
