#pragma once

#include <json.hpp>

#include "puropt/channel_tools.hpp"
#include "puropt/operator_reduction.hpp"
#include "puropt/types.hpp"

namespace puropt {

using json = nlohmann::json;

// {"n": int, "entries": [real, ...]}
json vector_to_json(const Vec& v);
Vec vector_from_json(const json& j);

// {"d": int, "entries": [[[re, im], ...], ...]} row-major, d rows of d pairs.
json matrix_to_json(const CMat& m);
CMat matrix_from_json(const json& j);

// {"d_in": int, "d_out": int, "kraus": [matrix, ...]} or {..., "choi": matrix}.
json channel_to_json(const ChannelRep& channel);
ChannelRep channel_from_json(const json& j);

struct TomoInput {
  std::vector<CMat> basis;
  Vec frequencies;
  double t = 1.0;
};

// {"basis": [matrix, ...], "frequencies": [real, ...], "t": real}
TomoInput tomo_from_json(const json& j);

json solve_result_to_json(const SolveResult& result);

}  // namespace puropt
