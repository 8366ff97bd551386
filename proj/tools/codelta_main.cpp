#include <CLI11.hpp>

#include <codelta/lang/eval.hpp>
#include <codelta/lang/typecheck.hpp>
#include <codelta/poly_json.hpp>
#include <codelta/report_json.hpp>

#include <cctype>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using codelta::Json;

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return std::nullopt;
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int write_report(const Json& j, const std::string& out_path) {
  std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) {
    std::cerr << "cannot write " << out_path << "\n";
    return 2;
  }
  f << text;
  return 0;
}

codelta::Space parse_space_flag(const std::string& s) {
  if (s.size() >= 3 && s[0] == 'R' && s[1] == '^') {
    bool digits = true;
    for (std::size_t i = 2; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) digits = false;
    if (digits && s.size() <= 4) return codelta::Space::real(std::stoi(s.substr(2)));
  }
  throw std::invalid_argument("space must look like R^n, got \"" + s + "\"");
}

codelta::Vector parse_coords(const std::string& s, const codelta::Space& space, const std::string& what) {
  std::vector<codelta::Rational> coords;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) coords.push_back(codelta::parse_rational(cell));
  if (static_cast<int>(coords.size()) != space.flat_dim())
    throw std::invalid_argument(what + " has " + std::to_string(coords.size()) +
                                " coordinates, the polynomial expects " + std::to_string(space.flat_dim()));
  return codelta::Vector(space, std::move(coords));
}

struct AxiomOpts {
  std::string space = "R^2";
  int order = 2;
  int cases = 100;
  std::uint64_t seed = 1;
  double tol = 1e-9;
  std::string out;
};

int run_axioms(const AxiomOpts& o) {
  codelta::LawReport rep;
  try {
    codelta::RunConfig cfg;
    cfg.space = parse_space_flag(o.space);
    cfg.order = o.order;
    cfg.cases = o.cases;
    cfg.seed = o.seed;
    cfg.tol = o.tol;
    rep = codelta::check_full_suite(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "axioms: " << e.what() << "\n";
    return 2;
  }
  if (int rc = write_report(codelta::law_report_json(rep), o.out)) return rc;
  return rep.all_passed() ? 0 : 1;
}

struct EvalOpts {
  std::string term_path;
  std::string env_path;
  std::string out;
};

int run_eval(const EvalOpts& o) {
  auto text = read_file(o.term_path);
  if (!text) {
    std::cerr << "cannot read " << o.term_path << "\n";
    return 2;
  }
  codelta::lang::LoadedEnv loaded;
  if (!o.env_path.empty()) {
    auto env_text = read_file(o.env_path);
    if (!env_text) {
      std::cerr << "cannot read " << o.env_path << "\n";
      return 2;
    }
    try {
      loaded = codelta::lang::env_from_json(codelta::parse_json_strict(*env_text));
    } catch (const std::exception& e) {
      std::cerr << "eval: environment: " << e.what() << "\n";
      return 2;
    }
  }
  Json j;
  try {
    if (text->find('=') != std::string::npos) {
      auto decls = codelta::lang::parse_declarations(*text);
      auto checked = codelta::lang::check_declarations(std::move(decls), loaded.types);
      codelta::lang::Env env = loaded.values;
      Json results = Json::array();
      for (auto& cd : checked) {
        codelta::lang::SemValue v = codelta::lang::evaluate_checked(*cd.decl.body, env);
        results.push_back(Json{{"name", cd.decl.name},
                               {"type", cd.type.to_string()},
                               {"value", codelta::lang::sem_to_json(v)}});
        env.insert_or_assign(cd.decl.name, std::move(v));
      }
      j = Json{{"schema", "eval/1"}, {"results", results}};
    } else {
      codelta::lang::TermPtr t = codelta::lang::parse_term_text(*text);
      codelta::lang::Checker ck(loaded.types);
      codelta::lang::TypeExpr ty = ck.check(*t);
      codelta::lang::SemValue v = codelta::lang::evaluate_checked(*t, loaded.values);
      j = Json{{"schema", "eval/1"}, {"type", ty.to_string()}, {"value", codelta::lang::sem_to_json(v)}};
    }
  } catch (const codelta::lang::LangError& e) {
    std::cerr << "eval: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "eval: " << e.what() << "\n";
    return 1;
  }
  return write_report(j, o.out);
}

struct DiffOpts {
  std::string poly_path;
  std::string point;
  std::string direction;
  std::string out;
};

int run_diff(const DiffOpts& o) {
  Json j;
  try {
    auto text = read_file(o.poly_path);
    if (!text) {
      std::cerr << "cannot read " << o.poly_path << "\n";
      return 2;
    }
    codelta::PolyMap f = codelta::poly_from_json_text(*text);
    codelta::Vector x = parse_coords(o.point, f.domain(), "point");
    codelta::Vector v = parse_coords(o.direction, f.domain(), "direction");
    codelta::Vector d = codelta::poly_diff(f, x, v);
    Json value = Json::array();
    for (int i = 0; i < d.dim(); ++i) value.push_back(codelta::to_string(d[i]));
    j = Json{{"schema", "diff/1"}, {"value", value}};
  } catch (const std::exception& e) {
    std::cerr << "diff: " << e.what() << "\n";
    return 2;
  }
  return write_report(j, o.out);
}

struct CurveOpts {
  std::string csv_path;
  int order = 2;
  std::string out;
};

int run_curve(const CurveOpts& o) {
  codelta::SampledReport rep;
  try {
    auto text = read_file(o.csv_path);
    if (!text) {
      std::cerr << "cannot read " << o.csv_path << "\n";
      return 2;
    }
    codelta::SampledCurve sc = codelta::curve_from_csv_text(*text);
    rep = codelta::analyze_samples(sc, o.order);
  } catch (const std::exception& e) {
    std::cerr << "curve: " << e.what() << "\n";
    return 2;
  }
  if (int rc = write_report(codelta::sampled_report_json(rep), o.out)) return rc;
  return rep.smooth ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"differential linear logic model, batch runner"};
  app.require_subcommand(1);

  AxiomOpts ax;
  CLI::App* axioms = app.add_subcommand("axioms", "run the law suites and write a report");
  axioms->add_option("--space", ax.space, "flat base space, R^n");
  axioms->add_option("--order", ax.order, "maximum distribution order");
  axioms->add_option("--cases", ax.cases, "cases per law");
  axioms->add_option("--seed", ax.seed, "seed for all sampling");
  axioms->add_option("--tol", ax.tol, "tolerance for float paths");
  axioms->add_option("--out", ax.out, "report path, stdout when omitted");

  EvalOpts ev;
  CLI::App* eval = app.add_subcommand("eval", "typecheck and evaluate a term file");
  eval->add_option("file", ev.term_path, "term or declaration file")->required();
  eval->add_option("--env", ev.env_path, "environment JSON");
  eval->add_option("--out", ev.out, "report path, stdout when omitted");

  DiffOpts df;
  CLI::App* diff = app.add_subcommand("diff", "differentiate a polynomial map");
  diff->add_option("file", df.poly_path, "polynomial JSON")->required();
  diff->add_option("--point", df.point, "base point, comma separated rationals")->required();
  diff->add_option("--direction", df.direction, "direction, comma separated rationals")->required();
  diff->add_option("--out", df.out, "report path, stdout when omitted");

  CurveOpts cv;
  CLI::App* curve = app.add_subcommand("curve", "analyze sampled curve quotients");
  curve->add_option("file", cv.csv_path, "CSV samples, header t,x1,...,xn")->required();
  curve->add_option("--order", cv.order, "maximum quotient order");
  curve->add_option("--out", cv.out, "report path, stdout when omitted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (axioms->parsed()) return run_axioms(ax);
  if (eval->parsed()) return run_eval(ev);
  if (diff->parsed()) return run_diff(df);
  return run_curve(cv);
}
