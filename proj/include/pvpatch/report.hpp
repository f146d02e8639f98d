#pragma once
#include <array>
#include <string>
#include <vector>

#include "json.hpp"
#include "pvpatch/groups.hpp"
#include "pvpatch/matrix.hpp"
#include "pvpatch/series.hpp"

namespace pvp {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "pvpatch/1";

// Knobs for one run. Serialized into every report so a result can be
// reproduced from the report alone.
struct RunConfig {
  int t_prec = 10;
  int x_lo = -12;
  int x_hi = 12;
  int degree_cap = 4;
  std::array<int, 4> bounds{8, 8, 8, 8};
  long long seed = 0;

  SeriesCtx ctx() const { return SeriesCtx{t_prec, x_lo, x_hi}; }
  void validate() const; // BadInput when out of order or nonpositive
};

Json config_json(const RunConfig& c);
RunConfig config_from_json(const Json& j);

// human-readable summary of the bounds a verdict is relative to
std::string bounds_brief(const RunConfig& c);

// One verdict. `bounds` names the precision/degree the verdict holds at;
// no check asserts an unbounded claim.
struct Check {
  std::string name;
  bool pass = false;
  std::string bounds;
  std::string detail;
};

struct Report {
  std::string command;
  RunConfig config;
  std::vector<Check> checks;
  Json payload = Json::object(); // command-specific certificates and results

  bool ok() const;
  void add(const std::string& name, bool pass, const std::string& bounds,
           const std::string& detail = "");
};

Json report_json(const Report& r);
std::string report_text(const Report& r);

// wire forms shared by every verb
Json series_json(const TSeries& s);
TSeries series_from_json(const Json& j);
Json smat_json(const SMat& m);
SMat smat_from_json(const Json& j);
Json rmat_json(const RMat& m);
RMat rmat_from_json(const Json& j);
Json group_json(const Group& g);
Group group_from_json(const Json& j);

} // namespace pvp
