#include "bbem/solvers.hpp"

#include <json.hpp>

namespace bbem {

std::string SolveReport::to_json(bool include_timing) const {
  nlohmann::ordered_json j;
  j["kind"] = kind;
  j["alpha"] = alpha;
  j["residual_l2"] = residual_l2;
  j["sigma_min"] = sigma_min;
  j["sigma_max"] = sigma_max;
  j["pressure_constant"] = pressure_constant;
  if (include_timing) j["wall_time_s"] = wall_time_s;
  j["warnings"] = warnings;
  return j.dump(2);
}

}  // namespace bbem
