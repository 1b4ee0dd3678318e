#include "puropt/json_io.hpp"

#include <cmath>

#include "puropt/errors.hpp"

namespace puropt {

json vector_to_json(const Vec& v) {
  return json{{"n", v.size()}, {"entries", v}};
}

Vec vector_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("entries")) {
    throw ValidationError("vector JSON needs fields \"n\" and \"entries\"");
  }
  Vec v = j.at("entries").get<Vec>();
  if (v.size() != j.at("n").get<std::size_t>()) {
    throw ValidationError("vector JSON: n does not match the entry count");
  }
  for (double x : v) {
    if (!std::isfinite(x)) throw ValidationError("vector JSON: entries must be finite");
  }
  return v;
}

json matrix_to_json(const CMat& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back({m(r, c).real(), m(r, c).imag()});
    }
    rows.push_back(std::move(row));
  }
  return json{{"d", m.rows()}, {"entries", std::move(rows)}};
}

CMat matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("d") || !j.contains("entries")) {
    throw ValidationError("matrix JSON needs fields \"d\" and \"entries\"");
  }
  const auto d = j.at("d").get<Eigen::Index>();
  const json& rows = j.at("entries");
  if (d < 1 || !rows.is_array() || static_cast<Eigen::Index>(rows.size()) != d) {
    throw ValidationError("matrix JSON: expected d rows");
  }
  CMat m(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    const json& row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d) {
      throw ValidationError("matrix JSON: expected d entries per row");
    }
    for (Eigen::Index c = 0; c < d; ++c) {
      const json& pair = row[static_cast<std::size_t>(c)];
      if (!pair.is_array() || pair.size() != 2) {
        throw ValidationError("matrix JSON: entries must be [re, im] pairs");
      }
      const double re = pair[0].get<double>();
      const double im = pair[1].get<double>();
      if (!std::isfinite(re) || !std::isfinite(im)) {
        throw ValidationError("matrix JSON: entries must be finite");
      }
      m(r, c) = std::complex<double>(re, im);
    }
  }
  return m;
}

json channel_to_json(const ChannelRep& channel) {
  json j{{"d_in", channel.d_in()}, {"d_out", channel.d_out()}};
  if (channel.has_kraus()) {
    json kraus = json::array();
    for (const CMat& k : channel.kraus()) kraus.push_back(matrix_to_json(k));
    j["kraus"] = std::move(kraus);
  } else {
    j["choi"] = matrix_to_json(channel.choi());
  }
  return j;
}

ChannelRep channel_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("channel JSON must be an object");
  if (j.contains("kraus")) {
    std::vector<CMat> kraus;
    for (const json& k : j.at("kraus")) kraus.push_back(matrix_from_json(k));
    return ChannelRep::from_kraus(std::move(kraus));
  }
  if (j.contains("choi")) {
    if (!j.contains("d_in") || !j.contains("d_out")) {
      throw ValidationError("channel JSON with a Choi matrix needs d_in and d_out");
    }
    return ChannelRep::from_choi(matrix_from_json(j.at("choi")), j.at("d_in").get<int>(),
                                 j.at("d_out").get<int>());
  }
  throw ValidationError("channel JSON needs either \"kraus\" or \"choi\"");
}

TomoInput tomo_from_json(const json& j) {
  if (!j.is_object() || !j.contains("basis") || !j.contains("frequencies") || !j.contains("t")) {
    throw ValidationError("tomography JSON needs \"basis\", \"frequencies\" and \"t\"");
  }
  TomoInput input;
  for (const json& b : j.at("basis")) input.basis.push_back(matrix_from_json(b));
  input.frequencies = j.at("frequencies").get<Vec>();
  input.t = j.at("t").get<double>();
  if (!std::isfinite(input.t)) throw ValidationError("tomography JSON: t must be finite");
  return input;
}

json solve_result_to_json(const SolveResult& result) {
  json j;
  j["optimum"] = result.optimum;
  j["optimizer"] = vector_to_json(result.optimizer);
  j["regime"] = to_string(result.regime);
  j["stats"] = {{"iterations", result.stats.iterations},
                {"recursion_depth", result.stats.recursion_depth},
                {"scalar_evals", result.stats.scalar_evals},
                {"removed_indices", result.stats.removed_indices}};
  return j;
}

}  // namespace puropt
