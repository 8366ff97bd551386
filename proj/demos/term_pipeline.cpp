#include <codelta/lang/eval.hpp>
#include <codelta/lang/typecheck.hpp>

#include <cstdio>
#include <map>
#include <string>

using codelta::Rational;
using codelta::Space;
using codelta::Vector;
namespace lang = codelta::lang;

int main() {
  lang::Env env;
  env.emplace("v", lang::SemValue::vec(Vector(Space::real(2), {Rational(1), Rational(2)})));
  std::map<std::string, lang::TypeExpr> types;
  types.emplace("v", lang::parse_type_text("R^2"));

  const char* programs[] = {
      "derelict(coder(v))",
      "cocontract(coweaken(), coder(v))",
      "( \\s : I . s + s ) 2",
      "\\u : !R^2 . derelict(u)",
  };

  for (const char* src : programs) {
    lang::TermPtr t = lang::parse_term_text(src);
    lang::Checker ck(types);
    lang::TypeExpr ty = ck.check(*t);
    lang::SemValue out = lang::evaluate(*t, env);
    std::printf("%s\n  : %s\n  = %s\n", lang::print_term(t).c_str(), ty.to_string().c_str(),
                lang::sem_to_json(out).dump().c_str());
  }
  return 0;
}
