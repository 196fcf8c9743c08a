#include "stein/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "stein/errors.hpp"

namespace stein {

namespace {

constexpr int kSchemaVersion = 1;

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  const int rows = static_cast<int>(j.size());
  if (rows == 0) return Matrix(0, 0);
  const int cols = static_cast<int>(j.at(0).size());
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int c = 0; c < cols; ++c) m(i, c) = j.at(i).at(c).get<double>();
  return m;
}

void put_opt(Json& j, const char* key, const std::optional<double>& v) {
  if (v) j[key] = *v;
}

std::optional<double> get_opt(const Json& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  return j.at(key).get<double>();
}

}  // namespace

Json to_json(const Seminorms& s) {
  Json j = Json::object();
  put_opt(j, "m0", s.m0);
  put_opt(j, "m1", s.m1);
  put_opt(j, "m2", s.m2);
  put_opt(j, "m3", s.m3);
  put_opt(j, "m2_tilde", s.m2_tilde);
  return j;
}

Seminorms seminorms_from_json(const Json& j) {
  Seminorms s;
  s.m0 = get_opt(j, "m0");
  s.m1 = get_opt(j, "m1");
  s.m2 = get_opt(j, "m2");
  s.m3 = get_opt(j, "m3");
  s.m2_tilde = get_opt(j, "m2_tilde");
  return s;
}

Json to_json(const ConditionMoments& m) {
  Json j;
  j["mode"] = (m.mode == PairMode::discrete ? "discrete" : "infinitesimal");
  j["exact"] = m.exact;
  j["lambda"] = matrix_to_json(m.lambda);
  j["sigma"] = matrix_to_json(m.sigma);
  j["lambda_inv_op"] = m.lambda_inv_op;
  j["e_abs_mean"] = m.e_abs_mean;
  j["e_abs_se"] = m.e_abs_se;
  j["eprime_hs_mean"] = m.eprime_hs_mean;
  j["eprime_se"] = m.eprime_se;
  j["third_moment"] = m.third_moment;
  j["third_se"] = m.third_se;
  j["outer"] = m.outer;
  j["inner"] = m.inner;
  return j;
}

ConditionMoments moments_from_json(const Json& j) {
  ConditionMoments m;
  m.mode = j.at("mode").get<std::string>() == "infinitesimal"
               ? PairMode::infinitesimal
               : PairMode::discrete;
  m.exact = j.at("exact").get<bool>();
  m.lambda = matrix_from_json(j.at("lambda"));
  m.sigma = matrix_from_json(j.at("sigma"));
  m.lambda_inv_op = j.at("lambda_inv_op").get<double>();
  m.e_abs_mean = j.at("e_abs_mean").get<double>();
  m.e_abs_se = j.at("e_abs_se").get<double>();
  m.eprime_hs_mean = j.at("eprime_hs_mean").get<double>();
  m.eprime_se = j.at("eprime_se").get<double>();
  m.third_moment = j.at("third_moment").get<double>();
  m.third_se = j.at("third_se").get<double>();
  m.outer = j.at("outer").get<std::uint64_t>();
  m.inner = j.at("inner").get<std::uint64_t>();
  return m;
}

Json to_json(const BoundReport& r) {
  Json j;
  j["theorem"] = r.theorem;
  j["g_label"] = r.g_label;
  Json terms = Json::array();
  for (const auto& t : r.terms) {
    Json jt;
    jt["name"] = t.name;
    jt["value"] = t.value;
    terms.push_back(std::move(jt));
  }
  j["terms"] = std::move(terms);
  j["total"] = r.total;
  j["seminorms"] = to_json(r.seminorms_used);
  j["moments"] = to_json(r.moments);
  j["box_restricted_seminorms"] = r.box_restricted_seminorms;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

BoundReport bound_report_from_json(const Json& j) {
  BoundReport r;
  r.theorem = j.at("theorem").get<std::string>();
  r.g_label = j.at("g_label").get<std::string>();
  for (const auto& jt : j.at("terms"))
    r.terms.push_back({jt.at("name").get<std::string>(),
                       jt.at("value").get<double>()});
  r.total = j.at("total").get<double>();
  r.seminorms_used = seminorms_from_json(j.at("seminorms"));
  r.moments = moments_from_json(j.at("moments"));
  r.box_restricted_seminorms = j.at("box_restricted_seminorms").get<bool>();
  if (j.contains("note")) r.note = j.at("note").get<std::string>();
  return r;
}

Json to_json(const DiscrepancyEstimate& d) {
  Json j;
  j["g_label"] = d.g_label;
  j["value"] = d.value;
  j["sample_se"] = d.sample_se;
  j["quad_err"] = d.quad_err;
  return j;
}

Json to_json(const SlicedW1& s) {
  Json j;
  j["value"] = s.value;
  j["mean"] = s.mean;
  j["argmax"] = s.argmax;
  return j;
}

Json to_json(const NullLevel& n) {
  Json j;
  j["mean"] = n.mean;
  j["sd"] = n.sd;
  return j;
}

Json to_json(const ExperimentReport& r) {
  Json j;
  j["version"] = kSchemaVersion;
  j["application"] = r.application;
  j["config"] = r.config;
  Json bounds = Json::array();
  for (const auto& b : r.bounds) bounds.push_back(to_json(b));
  j["bounds"] = std::move(bounds);
  if (!r.discrepancies.empty()) {
    Json d = Json::array();
    for (const auto& e : r.discrepancies) d.push_back(to_json(e));
    j["discrepancy"] = std::move(d);
  }
  if (r.sliced) j["sliced_w1"] = to_json(*r.sliced);
  if (r.sliced_null) j["sliced_w1_null"] = to_json(*r.sliced_null);
  if (!r.extras.is_null()) j["extras"] = r.extras;
  if (r.stamp) {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc;
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    j["timestamp"] = buf;
  }
  return j;
}

std::string render_json(const Json& j) { return j.dump(2) + "\n"; }

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot open for writing: " + path);
  out << content;
  if (!out) throw IoFailure("write failed: " + path);
}

std::string samples_to_csv(const Matrix& samples) {
  std::string out;
  out.reserve(static_cast<std::size_t>(samples.rows() + 1) * 24 *
              static_cast<std::size_t>(samples.cols()));
  for (int c = 0; c < samples.cols(); ++c) {
    if (c) out += ',';
    out += "W" + std::to_string(c + 1);
  }
  out += '\n';
  char buf[40];
  for (int i = 0; i < samples.rows(); ++i) {
    for (int c = 0; c < samples.cols(); ++c) {
      if (c) out += ',';
      std::snprintf(buf, sizeof buf, "%.17g", samples(i, c));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace stein
