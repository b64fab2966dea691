// Batch front door: declarative specs in, CSV trajectories and JSON
// reports out. Exit codes: 0 ok, 1 spec error, 2 not-in-Lp,
// 3 no-convergence, 4 invariant failure.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lieac/checks.hpp"
#include "lieac/controls.hpp"
#include "lieac/lebesgue.hpp"
#include "lieac/parallel.hpp"

using nlohmann::json;

namespace {

using namespace lieac;

[[noreturn]] void spec_fail(const std::string& what) {
  fail(ErrorCode::InvalidInput, "spec: " + what);
}

// ---- TOML-subset reader -> the same tree the JSON reader produces ----
// Sections (dotted paths), key = value, numbers/strings/booleans, inline
// arrays, # comments. Bare inf maps to the string "inf" (the p field).

std::string trim(const std::string& s) {
  const size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
  bool in_str = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_str = !in_str;
    if (line[i] == '#' && !in_str) return line.substr(0, i);
  }
  return line;
}

json parse_toml_value(const std::string& raw);

json parse_toml_array(const std::string& body) {
  json arr = json::array();
  int depth = 0;
  bool in_str = false;
  std::string cur;
  for (char ch : body) {
    if (ch == '"') in_str = !in_str;
    if (!in_str) {
      if (ch == '[') ++depth;
      if (ch == ']') --depth;
      if (ch == ',' && depth == 0) {
        if (!trim(cur).empty()) arr.push_back(parse_toml_value(trim(cur)));
        cur.clear();
        continue;
      }
    }
    cur += ch;
  }
  if (!trim(cur).empty()) arr.push_back(parse_toml_value(trim(cur)));
  return arr;
}

json parse_toml_value(const std::string& raw) {
  const std::string v = trim(raw);
  if (v.empty()) spec_fail("empty value in key-value line");
  if (v.front() == '"') {
    if (v.size() < 2 || v.back() != '"')
      spec_fail("unterminated string value: " + v);
    return json(v.substr(1, v.size() - 2));
  }
  if (v.front() == '[') {
    if (v.back() != ']') spec_fail("unterminated array value: " + v);
    return parse_toml_array(v.substr(1, v.size() - 2));
  }
  if (v == "true") return json(true);
  if (v == "false") return json(false);
  if (v == "inf") return json("inf");
  try {
    size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) spec_fail("trailing characters in number: " + v);
    return json(x);
  } catch (const std::exception&) {
    spec_fail("cannot parse value: " + v);
  }
}

json parse_toml_subset(const std::string& text) {
  json root = json::object();
  json* cur = &root;
  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') spec_fail("unterminated section: " + line);
      std::string path = trim(line.substr(1, line.size() - 2));
      cur = &root;
      size_t pos = 0;
      while (pos != std::string::npos) {
        const size_t dot = path.find('.', pos);
        const std::string part =
            trim(dot == std::string::npos ? path.substr(pos)
                                          : path.substr(pos, dot - pos));
        if (part.empty()) spec_fail("empty section name in: " + line);
        cur = &((*cur)[part]);
        if (cur->is_null()) *cur = json::object();
        pos = dot == std::string::npos ? dot : dot + 1;
      }
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos) spec_fail("expected key = value: " + line);
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) spec_fail("empty key in: " + line);
    (*cur)[key] = parse_toml_value(line.substr(eq + 1));
  }
  return root;
}

json parse_spec_text(const std::string& text) {
  const size_t i = text.find_first_not_of(" \t\r\n");
  if (i != std::string::npos && text[i] == '{') {
    try {
      return json::parse(text);
    } catch (const std::exception& e) {
      spec_fail(std::string("JSON parse error: ") + e.what());
    }
  }
  return parse_toml_subset(text);
}

// ---- spec interpretation ----

double num_at(const json& j, const std::string& key) {
  if (!j.contains(key) || !j[key].is_number())
    spec_fail("missing numeric field '" + key + "'");
  return j[key].get<double>();
}

double num_or(const json& j, const std::string& key, double dflt) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_number()) spec_fail("field '" + key + "' must be a number");
  return j[key].get<double>();
}

Vec vec_of(const json& a, const std::string& ctx) {
  if (!a.is_array()) spec_fail(ctx + " must be an array");
  Vec v(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number()) spec_fail(ctx + " must hold numbers");
    v[i] = a[i].get<double>();
  }
  return v;
}

struct RunSpec {
  GroupPtr group;
  Interval domain{0.0, 1.0};
  Exponent p = Exponent::finite(2.0);
  ControlDescriptor control;
  EvolConfig evolve;
  int out_times = 201;
  std::string csv_name = "trajectory.csv";
  std::string report_name = "report.json";
  uint64_t seed = 0;
  json canonical;  // normalized echo; reparsing it reproduces this spec
};

GroupPtr group_of(const json& g, json& echo) {
  if (!g.is_object() || !g.contains("name") || !g["name"].is_string())
    spec_fail("group needs a name");
  const std::string name = g["name"].get<std::string>();
  echo["name"] = name;
  if (name == "Translation") {
    const int d = static_cast<int>(num_or(g, "d", 3));
    echo["d"] = d;
    return translation_group(d);
  }
  if (name == "GL") {
    const int n = static_cast<int>(num_or(g, "n", 2));
    echo["n"] = n;
    return gl(n);
  }
  if (name == "PositiveScalars") return positive_scalars();
  if (name == "SO3") return so3();
  if (name == "SE2") return se2();
  if (name == "Heisenberg") return heisenberg3();
  spec_fail("unknown group name: " + name +
            " (expected Translation|PositiveScalars|GL|SO3|SE2|Heisenberg)");
}

ControlDescriptor control_of(const json& c, json& echo) {
  if (!c.is_object() || !c.contains("kind") || !c["kind"].is_string())
    spec_fail("control needs a kind");
  ControlDescriptor d;
  d.kind = c["kind"].get<std::string>();
  echo["kind"] = d.kind;
  if (d.kind == "step") {
    if (!c.contains("values") || !c["values"].is_array())
      spec_fail("step control needs values");
    if (c.contains("breaks")) {
      for (const auto& b : c["breaks"]) d.breaks.push_back(b.get<double>());
    }
    for (const auto& row : c["values"])
      d.values.push_back(vec_of(row, "step values"));
    d.raw = c.value("raw", false);
    echo["breaks"] = c.value("breaks", json::array());
    echo["values"] = c["values"];
    echo["raw"] = d.raw;
  } else if (d.kind == "poly") {
    if (!c.contains("coeffs") || !c["coeffs"].is_array())
      spec_fail("poly control needs coeffs");
    for (const auto& row : c["coeffs"])
      d.poly.push_back(vec_of(row, "poly coeffs"));
    echo["coeffs"] = c["coeffs"];
  } else if (d.kind == "trig") {
    d.amp = vec_of(c.value("amp", json::array()), "trig amp");
    d.freq = vec_of(c.value("freq", json::array()), "trig freq");
    d.phase = vec_of(c.value("phase", json::array()), "trig phase");
    echo["amp"] = c.value("amp", json::array());
    echo["freq"] = c.value("freq", json::array());
    echo["phase"] = c.value("phase", json::array());
  } else if (d.kind == "power") {
    d.coords = vec_of(c.value("coords", json::array()), "power coords");
    d.expo = num_at(c, "expo");
    d.origin = num_or(c, "origin", 0.0);
    echo["coords"] = c.value("coords", json::array());
    echo["expo"] = d.expo;
    echo["origin"] = d.origin;
  } else if (d.kind == "samples-file") {
    if (!c.contains("path") || !c["path"].is_string())
      spec_fail("samples-file control needs a path");
    d.samples_path = c["path"].get<std::string>();
    d.jump_tol = num_or(c, "jump_tol", 1e-6);
    echo["path"] = d.samples_path;
    echo["jump_tol"] = d.jump_tol;
  } else {
    spec_fail("unknown control kind: " + d.kind);
  }
  return d;
}

RunSpec interpret(const json& j) {
  if (!j.is_object()) spec_fail("top level must be an object");
  RunSpec rs;
  json echo = json::object();

  if (!j.contains("group")) spec_fail("missing group");
  echo["group"] = json::object();
  rs.group = group_of(j["group"], echo["group"]);

  if (!j.contains("domain") || !j["domain"].is_array() ||
      j["domain"].size() != 2)
    spec_fail("domain must be [a, b]");
  const double a = j["domain"][0].get<double>();
  const double b = j["domain"][1].get<double>();
  if (!(a < b)) spec_fail("domain must satisfy a < b");
  rs.domain = Interval{a, b};
  echo["domain"] = {a, b};

  if (j.contains("p")) {
    if (j["p"].is_string()) {
      if (j["p"].get<std::string>() != "inf")
        spec_fail("p must be a number >= 1 or \"inf\"");
      rs.p = Exponent::inf();
      echo["p"] = "inf";
    } else if (j["p"].is_number()) {
      rs.p = Exponent::finite(j["p"].get<double>());
      echo["p"] = j["p"].get<double>();
    } else {
      spec_fail("p must be a number >= 1 or \"inf\"");
    }
  } else {
    echo["p"] = 2.0;
  }

  if (!j.contains("control")) spec_fail("missing control");
  echo["control"] = json::object();
  rs.control = control_of(j["control"], echo["control"]);

  const json e = j.value("evolve", json::object());
  rs.evolve.n_subdivisions = static_cast<int>(num_or(e, "n_subdivisions", 8));
  rs.evolve.method =
      evol_method_from_name(e.value("method", std::string("CF4")));
  rs.evolve.residual_tol = num_or(e, "residual_tol", 1e-8);
  rs.evolve.max_refine = static_cast<int>(num_or(e, "max_refine", 8));
  const json q = e.value("quad", json::object());
  rs.evolve.quad = QuadratureConfig(
      num_or(q, "abs_tol", QuadratureConfig{}.abs_tol),
      num_or(q, "rel_tol", QuadratureConfig{}.rel_tol),
      static_cast<int>(num_or(q, "max_depth", QuadratureConfig{}.max_depth)));
  rs.evolve.validate();
  echo["evolve"] = {{"n_subdivisions", rs.evolve.n_subdivisions},
                    {"method", evol_method_name(rs.evolve.method)},
                    {"residual_tol", rs.evolve.residual_tol},
                    {"max_refine", rs.evolve.max_refine},
                    {"quad",
                     {{"abs_tol", rs.evolve.quad.abs_tol},
                      {"rel_tol", rs.evolve.quad.rel_tol},
                      {"max_depth", rs.evolve.quad.max_depth}}}};

  const json o = j.value("output", json::object());
  rs.out_times = static_cast<int>(num_or(o, "times", 201));
  if (rs.out_times < 2) spec_fail("output.times must be at least 2");
  rs.csv_name = o.value("csv", std::string("trajectory.csv"));
  rs.report_name = o.value("json", std::string("report.json"));
  echo["output"] = {{"times", rs.out_times},
                    {"csv", rs.csv_name},
                    {"json", rs.report_name}};

  rs.seed = static_cast<uint64_t>(num_or(j, "seed", 0.0));
  echo["seed"] = static_cast<double>(rs.seed);

  rs.canonical = echo;
  return rs;
}

// ---- reporting helpers ----

json num(double x) {
  if (std::isfinite(x)) return json(x);
  if (std::isnan(x)) return json("nan");
  return json(x > 0 ? "inf" : "-inf");
}

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorCode::InvalidInput,
          "cannot open output file: " + path.string());
  out << text;
}

void emit_report(const json& rep, const std::filesystem::path& path,
                 bool verbose) {
  const std::string text = rep.dump(2) + "\n";
  write_text(path, text);
  if (verbose) std::cout << text;
}

// ---- commands ----

int cmd_norm(const RunSpec& rs, const std::filesystem::path& out,
             bool verbose) {
  const PiecewiseCurve curve =
      build_control(rs.group, rs.domain, rs.control);
  const int n = rs.group->n;
  json rep;
  rep["command"] = "norm";
  rep["spec"] = rs.canonical;

  int code = 0;
  json values = json::object();
  const std::vector<Seminorm> qs = {
      Seminorm::euclidean(n * n), Seminorm::max(n * n),
      Seminorm::matrix_frobenius(n), Seminorm::matrix_operator_estimate(n)};
  for (const auto& q : qs) {
    try {
      values[q.name()] = lp_seminorm(curve, q, rs.p, rs.evolve.quad);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotInLp) throw;
      values[q.name()] = "not-in-Lp";
      code = 2;
    }
  }
  rep["p"] = rs.p.is_inf ? json("inf") : json(rs.p.value);
  rep["seminorms"] = values;

  const std::vector<Exponent> exps = {Exponent::finite(1.0),
                                      Exponent::finite(2.0),
                                      Exponent::finite(4.0), Exponent::inf()};
  const Seminorm qe = Seminorm::euclidean(n * n);
  json table = json::array();
  for (size_t i = 0; i < exps.size(); ++i) {
    for (size_t k = i; k < exps.size(); ++k) {
      json row;
      row["p"] = exps[i].str();
      row["r"] = exps[k].str();
      try {
        const InclusionSides s =
            inclusion_check(LpElement(curve, exps[i], rs.evolve.quad), exps[k],
                            qe);
        row["lhs"] = num(s.lhs);
        row["rhs"] = num(s.rhs);
        row["holds"] = s.lhs <= s.rhs * (1.0 + 1e-8);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NotInLp) throw;
        row["status"] = "not-in-Lp";
      }
      table.push_back(row);
    }
  }
  rep["inclusion"] = table;

  emit_report(rep, out / rs.report_name, true);
  (void)verbose;
  return code;
}

int cmd_evolve(const RunSpec& rs, const std::filesystem::path& out,
               bool verbose) {
  const PiecewiseCurve curve =
      build_control(rs.group, rs.domain, rs.control);
  const LpElement gamma(curve, rs.p, rs.evolve.quad);
  const EvolResult res = evolve(rs.group, gamma, rs.evolve);

  const int n = rs.group->n;
  std::string csv = "t";
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      csv += ",m" + std::to_string(i) + std::to_string(k);
  csv += "\n";
  for (int row = 0; row < rs.out_times; ++row) {
    const double t =
        rs.domain.a + rs.domain.length() * row / (rs.out_times - 1.0);
    csv += g17(t);
    const Mat m = res.curve.value(t);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) csv += "," + g17(m(i, k));
    csv += "\n";
  }
  write_text(out / rs.csv_name, csv);

  double max_step = 0.0;
  for (const auto& c : res.cells)
    max_step = std::max(max_step, c.step_distance);
  json rep;
  rep["command"] = "evolve";
  rep["spec"] = rs.canonical;
  rep["residual"] = num(res.residual);
  rep["refinements_used"] = res.refinements_used;
  rep["cells"] = static_cast<int>(res.cells.size());
  rep["max_step_distance"] = num(max_step);
  rep["csv"] = rs.csv_name;
  emit_report(rep, out / rs.report_name, verbose);
  std::cout << "residual " << g17(res.residual) << " over "
            << res.cells.size() << " cells\n";
  return 0;
}

int cmd_check(const RunSpec& rs, const std::filesystem::path& out,
              bool verbose, uint64_t seed) {
  const PiecewiseCurve curve =
      build_control(rs.group, rs.domain, rs.control);
  const LpElement gamma(curve, rs.p, rs.evolve.quad);
  const std::vector<CheckResult> results =
      run_checks(rs.group, gamma, rs.evolve, seed);

  bool all = true;
  json arr = json::array();
  for (const auto& r : results) {
    all = all && r.pass;
    arr.push_back({{"name", r.name},
                   {"pass", r.pass},
                   {"measure", num(r.measure)},
                   {"threshold", num(r.threshold)},
                   {"detail", r.detail}});
    std::cout << (r.pass ? "pass" : "FAIL") << "  " << r.name << "  measure "
              << g17(r.measure) << " vs " << g17(r.threshold) << "\n";
  }
  json rep;
  rep["command"] = "check";
  rep["spec"] = rs.canonical;
  rep["checks"] = arr;
  rep["all_pass"] = all;
  emit_report(rep, out / rs.report_name, verbose);
  return all ? 0 : 4;
}

int cmd_convergence(const RunSpec& rs, const std::filesystem::path& out,
                    bool verbose) {
  const PiecewiseCurve curve =
      build_control(rs.group, rs.domain, rs.control);
  const LpElement gamma(curve, rs.p, rs.evolve.quad);

  json rows = json::array();
  std::vector<double> lx, ly;
  for (int n : {4, 8, 16, 32, 64}) {
    EvolConfig cfg = rs.evolve;
    cfg.n_subdivisions = n;
    cfg.max_refine = 0;
    cfg.residual_tol = 1e300;  // measure the first pass, never refine
    const EvolResult res = evolve(rs.group, gamma, cfg);
    rows.push_back({{"n", n}, {"residual", num(res.residual)}});
    std::cout << "n " << n << "  residual " << g17(res.residual) << "\n";
    if (res.residual > 1e-300) {
      lx.push_back(std::log(static_cast<double>(n)));
      ly.push_back(std::log(res.residual));
    }
  }
  json rep;
  rep["command"] = "convergence";
  rep["spec"] = rs.canonical;
  rep["method"] = evol_method_name(rs.evolve.method);
  rep["rows"] = rows;
  if (lx.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    const double m = lx.size();
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    rep["slope"] = num(slope);
    std::cout << "slope " << g17(slope) << "\n";
  } else {
    rep["slope"] = "floor";  // residuals at the rounding floor
    std::cout << "slope floor\n";
  }
  emit_report(rep, out / rs.report_name, verbose);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"group-valued absolutely continuous curves from Lp controls"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string out_dir = ".";
  bool deterministic = false;
  bool verbose = false;
  uint64_t seed_flag = 0;
  std::vector<CLI::Option*> seed_opts;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--spec", spec_path, "spec file (JSON or TOML)")
        ->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_flag("--deterministic", deterministic,
                  "serial kernels, reproducible byte-for-byte");
    seed_opts.push_back(
        sub->add_option("--seed", seed_flag, "override the spec seed"));
    sub->add_flag("--verbose", verbose, "echo reports to stdout");
  };
  add_common(app.add_subcommand("norm", "seminorm and inclusion report"));
  add_common(app.add_subcommand("evolve", "solve delta(eta) = gamma"));
  add_common(app.add_subcommand("check", "named invariant suite"));
  add_common(
      app.add_subcommand("convergence", "residual vs subdivision count"));

  CLI11_PARSE(app, argc, argv);

  try {
    if (deterministic) lieac::par::set_enabled(false);

    std::ifstream in(spec_path, std::ios::binary);
    if (!in.good()) spec_fail("cannot open spec file: " + spec_path);
    std::stringstream buf;
    buf << in.rdbuf();
    RunSpec rs = interpret(parse_spec_text(buf.str()));

    uint64_t seed = rs.seed;
    for (const auto* o : seed_opts)
      if (o->count() > 0) seed = seed_flag;

    const std::filesystem::path out(out_dir);
    std::filesystem::create_directories(out);

    if (app.got_subcommand("norm")) return cmd_norm(rs, out, verbose);
    if (app.got_subcommand("evolve")) return cmd_evolve(rs, out, verbose);
    if (app.got_subcommand("check")) return cmd_check(rs, out, verbose, seed);
    return cmd_convergence(rs, out, verbose);
  } catch (const lieac::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case lieac::ErrorCode::NotInLp:
        return 2;
      case lieac::ErrorCode::NoConvergence:
        return 3;
      default:
        return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
