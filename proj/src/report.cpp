#include "pvpatch/report.hpp"

#include <sstream>

namespace pvp {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::DenominatorDegenerate: return "DenominatorDegenerate";
    case Errc::NoReconstruction: return "NoReconstruction";
    case Errc::InsufficientPrecision: return "InsufficientPrecision";
    case Errc::IllegalCoercion: return "IllegalCoercion";
    case Errc::NotInF: return "NotInF";
    case Errc::SingularResidue: return "SingularResidue";
    case Errc::WindowExhausted: return "WindowExhausted";
    case Errc::PrecisionExhausted: return "PrecisionExhausted";
    case Errc::DegreeOverflow: return "DegreeOverflow";
    case Errc::NotClosed: return "NotClosed";
    case Errc::FixtureRequired: return "FixtureRequired";
    case Errc::NotInvariant: return "NotInvariant";
    case Errc::NotNormal: return "NotNormal";
    case Errc::GeneratorAuditFailed: return "GeneratorAuditFailed";
    case Errc::BadAction: return "BadAction";
    case Errc::SingularFundamentalMatrix: return "SingularFundamentalMatrix";
    case Errc::ZeroScalar: return "ZeroScalar";
    case Errc::BlockEmbeddingUndefined: return "BlockEmbeddingUndefined";
    case Errc::FactorizationFailed: return "FactorizationFailed";
    case Errc::ReconstructionFailed: return "ReconstructionFailed";
    case Errc::GaugeMismatch: return "GaugeMismatch";
    case Errc::RecoveryFailed: return "RecoveryFailed";
    case Errc::BadInput: return "BadInput";
  }
  return "UnknownError";
}

int errc_exit_code(Errc c) {
  switch (c) {
    // inputs that violate a precondition of the requested operation
    case Errc::DenominatorDegenerate:
    case Errc::IllegalCoercion:
    case Errc::NotClosed:
    case Errc::FixtureRequired:
    case Errc::NotInvariant:
    case Errc::NotNormal:
    case Errc::GeneratorAuditFailed:
    case Errc::BadAction:
    case Errc::SingularResidue:
    case Errc::SingularFundamentalMatrix:
    case Errc::ZeroScalar:
    case Errc::BlockEmbeddingUndefined:
    case Errc::BadInput:
      return 2;
    // precision or bounds ran out before a verdict was possible
    case Errc::InsufficientPrecision:
    case Errc::WindowExhausted:
    case Errc::PrecisionExhausted:
    case Errc::DegreeOverflow:
      return 3;
    // the computation ran and the claim failed to verify
    case Errc::NoReconstruction:
    case Errc::NotInF:
    case Errc::FactorizationFailed:
    case Errc::ReconstructionFailed:
    case Errc::GaugeMismatch:
    case Errc::RecoveryFailed:
      return 1;
  }
  return 1;
}

void RunConfig::validate() const {
  if (t_prec <= 0) fail(Errc::BadInput, "t_prec must be positive");
  if (x_lo > x_hi) fail(Errc::BadInput, "x_window out of order");
  if (degree_cap < 0) fail(Errc::BadInput, "degree_cap must be nonnegative");
  for (int b : bounds)
    if (b < 0) fail(Errc::BadInput, "reconstruction bounds must be nonnegative");
}

Json config_json(const RunConfig& c) {
  Json j;
  j["t_prec"] = c.t_prec;
  j["x_window"] = Json::array({c.x_lo, c.x_hi});
  j["degree_cap"] = c.degree_cap;
  j["bounds"] = Json::array({c.bounds[0], c.bounds[1], c.bounds[2], c.bounds[3]});
  j["seed"] = c.seed;
  return j;
}

namespace {

[[noreturn]] void bad_schema(const std::string& what) {
  fail(Errc::BadInput, "schema error: " + what);
}

int get_int(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer())
    bad_schema(std::string("expected integer field '") + key + "'");
  return j[key].get<int>();
}

} // namespace

RunConfig config_from_json(const Json& j) {
  RunConfig c;
  if (!j.is_object()) bad_schema("config must be an object");
  if (j.contains("t_prec")) c.t_prec = get_int(j, "t_prec");
  if (j.contains("x_window")) {
    const auto& w = j["x_window"];
    if (!w.is_array() || w.size() != 2) bad_schema("x_window must be [lo, hi]");
    c.x_lo = w[0].get<int>();
    c.x_hi = w[1].get<int>();
  }
  if (j.contains("degree_cap")) c.degree_cap = get_int(j, "degree_cap");
  if (j.contains("bounds")) {
    const auto& b = j["bounds"];
    if (!b.is_array() || b.size() != 4) bad_schema("bounds must be a 4-tuple");
    for (int i = 0; i < 4; ++i) c.bounds[i] = b[i].get<int>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer()) bad_schema("seed must be an integer");
    c.seed = j["seed"].get<long long>();
  }
  c.validate();
  return c;
}

std::string bounds_brief(const RunConfig& c) {
  std::ostringstream o;
  o << "t^" << c.t_prec << ", x in [" << c.x_lo << "," << c.x_hi << "], deg<=" << c.degree_cap
    << ", rec(" << c.bounds[0] << "," << c.bounds[1] << "," << c.bounds[2] << "," << c.bounds[3]
    << ")";
  return o.str();
}

bool Report::ok() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

void Report::add(const std::string& name, bool pass, const std::string& bounds,
                 const std::string& detail) {
  checks.push_back(Check{name, pass, bounds, detail});
}

Json report_json(const Report& r) {
  Json j;
  j["schema"] = kSchema;
  j["command"] = r.command;
  j["config"] = config_json(r.config);
  j["status"] = r.ok() ? "pass" : "fail";
  Json cs = Json::array();
  for (const auto& c : r.checks) {
    Json cj;
    cj["name"] = c.name;
    cj["pass"] = c.pass;
    cj["bounds"] = c.bounds;
    if (!c.detail.empty()) cj["detail"] = c.detail;
    cs.push_back(std::move(cj));
  }
  j["checks"] = std::move(cs);
  if (!r.payload.empty())
    for (auto it = r.payload.begin(); it != r.payload.end(); ++it) j[it.key()] = it.value();
  return j;
}

std::string report_text(const Report& r) {
  std::ostringstream o;
  o << "== " << r.command << " ==\n";
  o << "config: " << bounds_brief(r.config) << ", seed " << r.config.seed << "\n";
  for (const auto& c : r.checks) {
    o << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << " (" << c.bounds << ")";
    if (!c.detail.empty()) o << " " << c.detail;
    o << "\n";
  }
  o << "status: " << (r.ok() ? "pass" : "fail") << "\n";
  return o.str();
}

Json series_json(const TSeries& s) {
  Json j;
  j["t_prec"] = s.t_lo + static_cast<int>(s.rows.size());
  j["t_exact"] = s.t_exact;
  j["t_lo"] = s.t_lo;
  Json rows = Json::array();
  for (std::size_t i = 0; i < s.rows.size(); ++i) {
    const XLaurent& xl = s.rows[i];
    Json rj;
    rj["t_exp"] = s.t_lo + static_cast<int>(i);
    rj["x_lo"] = xl.lo;
    Json cs = Json::array();
    for (const auto& q : xl.c) cs.push_back(rat_str(q));
    rj["coeffs"] = std::move(cs);
    if (!xl.exact_hi) rj["x_exact"] = false;
    rows.push_back(std::move(rj));
  }
  j["rows"] = std::move(rows);
  return j;
}

TSeries series_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("rows") || !j["rows"].is_array())
    bad_schema("series must be an object with a 'rows' array");
  TSeries s;
  s.t_exact = j.contains("t_exact") ? j["t_exact"].get<bool>() : true;
  const auto& rows = j["rows"];
  if (rows.empty()) {
    if (!s.t_exact) {
      if (!j.contains("t_prec")) bad_schema("inexact empty series needs t_prec");
      s.t_lo = get_int(j, "t_prec");
    }
    return s;
  }
  int prev = 0;
  bool first = true;
  for (const auto& rj : rows) {
    const int te = get_int(rj, "t_exp");
    if (first) {
      s.t_lo = te;
      first = false;
    } else if (te != prev + 1) {
      bad_schema("series rows must have consecutive t_exp");
    }
    prev = te;
    XLaurent xl;
    xl.lo = get_int(rj, "x_lo");
    if (!rj.contains("coeffs") || !rj["coeffs"].is_array())
      bad_schema("series row needs a 'coeffs' array");
    for (const auto& cj : rj["coeffs"]) {
      if (!cj.is_string()) bad_schema("series coefficients must be rational strings");
      xl.c.push_back(rat_parse(cj.get<std::string>()));
    }
    xl.hi = xl.lo + static_cast<int>(xl.c.size()) - 1;
    xl.exact_hi = rj.contains("x_exact") ? rj["x_exact"].get<bool>() : true;
    xl.normalize();
    s.rows.push_back(std::move(xl));
  }
  s.normalize();
  return s;
}

Json smat_json(const SMat& m) {
  Json j;
  j["n"] = m.n;
  Json rows = Json::array();
  for (int i = 0; i < m.n; ++i) {
    Json row = Json::array();
    for (int k = 0; k < m.n; ++k) row.push_back(series_json(m.at(i, k)));
    rows.push_back(std::move(row));
  }
  j["entries"] = std::move(rows);
  return j;
}

SMat smat_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("entries")) bad_schema("matrix needs an 'entries' field");
  const int n = get_int(j, "n");
  if (n <= 0) bad_schema("matrix size must be positive");
  const auto& rows = j["entries"];
  if (!rows.is_array() || static_cast<int>(rows.size()) != n)
    bad_schema("matrix entry rows do not match n");
  SMat m(n);
  for (int i = 0; i < n; ++i) {
    const auto& row = rows[i];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      bad_schema("matrix entry row length does not match n");
    for (int k = 0; k < n; ++k) m.at(i, k) = series_from_json(row[k]);
  }
  return m;
}

Json rmat_json(const RMat& m) {
  Json j;
  j["n"] = m.n;
  Json rows = Json::array();
  for (int i = 0; i < m.n; ++i) {
    Json row = Json::array();
    for (int k = 0; k < m.n; ++k) row.push_back(m.at(i, k).str());
    rows.push_back(std::move(row));
  }
  j["entries"] = std::move(rows);
  return j;
}

RMat rmat_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("entries")) bad_schema("matrix needs an 'entries' field");
  const int n = get_int(j, "n");
  if (n <= 0) bad_schema("matrix size must be positive");
  const auto& rows = j["entries"];
  if (!rows.is_array() || static_cast<int>(rows.size()) != n)
    bad_schema("matrix entry rows do not match n");
  RMat m(n);
  for (int i = 0; i < n; ++i) {
    const auto& row = rows[i];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      bad_schema("matrix entry row length does not match n");
    for (int k = 0; k < n; ++k) {
      if (!row[k].is_string()) bad_schema("rational-function entries must be strings");
      m.at(i, k) = BiRat::parse(row[k].get<std::string>());
    }
  }
  return m;
}

Json group_json(const Group& g) {
  Json j;
  j["name"] = g.name;
  j["n"] = g.n;
  Json gens = Json::array();
  for (const auto& gen : g.ring.gens) gens.push_back(gen.str(g.ring.vars));
  j["ideal_gens"] = std::move(gens);
  Json flags;
  flags["normal_in"] = g.normal_in;
  flags["generates_with"] = g.generates_with;
  j["flags"] = std::move(flags);
  return j;
}

Group group_from_json(const Json& j) {
  if (!j.is_object()) bad_schema("group must be an object");
  if (!j.contains("name") || !j["name"].is_string()) bad_schema("group needs a 'name' string");
  const int n = get_int(j, "n");
  if (!j.contains("ideal_gens") || !j["ideal_gens"].is_array())
    bad_schema("group needs an 'ideal_gens' array");
  std::vector<std::string> gens;
  for (const auto& s : j["ideal_gens"]) {
    if (!s.is_string()) bad_schema("ideal generators must be strings");
    gens.push_back(s.get<std::string>());
  }
  Group g = group_from_generators(j["name"].get<std::string>(), n, gens);
  if (j.contains("flags") && j["flags"].is_object()) {
    const auto& f = j["flags"];
    if (f.contains("normal_in"))
      g.normal_in = f["normal_in"].get<std::vector<std::string>>();
    if (f.contains("generates_with"))
      g.generates_with = f["generates_with"].get<std::vector<std::string>>();
  }
  return g;
}

} // namespace pvp
