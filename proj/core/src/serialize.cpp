#include "brw/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace brw {

namespace {

using Json = nlohmann::ordered_json;

void write_json(const Json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(key).dump() + ": ";
        write_json(value, out, indent + 2);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      out += flat ? "[" : "[\n";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? ", " : ",\n";
        first = false;
        if (!flat) out += pad;
        write_json(e, out, indent + 2);
      }
      out += flat ? "]" : "\n" + close_pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_number(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

std::string render(const Json& j) {
  std::string out;
  write_json(j, out, 0);
  out += "\n";
  return out;
}

Json parse_document(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InvalidArgument(std::string("malformed JSON payload: ") + e.what());
  }
  if (!j.is_object() || j.value("schema", "") != kSchema) {
    throw InvalidArgument("payload is not a " + std::string(kSchema) + " document");
  }
  return j;
}

Json header() {
  Json j;
  j["schema"] = kSchema;
  return j;
}

double number(const Json& j) {
  if (j.is_null()) return std::nan("");
  return j.get<double>();
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

double round15(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(format_number(v).c_str(), nullptr);
}

std::string to_json(const CriticalPoint& cp) {
  Json j = header();
  j["n"] = cp.n.value();
  j["lambda_c"] = cp.lambda_c;
  j["method"] = std::string(to_string(cp.method));
  j["residual"] = cp.residual;
  j["bracket_width"] = cp.bracket_width;
  return render(j);
}

CriticalPoint critical_point_from_json(std::string_view text) {
  Json j = parse_document(text);
  CriticalPoint cp;
  cp.n = IntervalRadius(j.at("n").get<long long>());
  cp.lambda_c = number(j.at("lambda_c"));
  cp.method = critical_method_from_string(j.at("method").get<std::string>());
  cp.residual = number(j.at("residual"));
  cp.bracket_width = number(j.at("bracket_width"));
  return cp;
}

std::string to_json(const std::vector<PhaseRow>& rows) {
  Json j = header();
  Json arr = Json::array();
  for (const PhaseRow& r : rows) {
    arr.push_back(Json{{"n", r.n}, {"lambda_c", r.lambda_c}, {"scaled_gap", r.scaled_gap}});
  }
  j["rows"] = std::move(arr);
  return render(j);
}

std::vector<PhaseRow> phase_rows_from_json(std::string_view text) {
  Json j = parse_document(text);
  std::vector<PhaseRow> rows;
  for (const auto& r : j.at("rows")) {
    rows.push_back({r.at("n").get<int>(), number(r.at("lambda_c")), number(r.at("scaled_gap"))});
  }
  return rows;
}

std::string to_json(const MeanMatrix& m) {
  Json j = header();
  j["n"] = m.n.value();
  j["lambda"] = m.lambda.value();
  j["t"] = m.t;
  j["size"] = m.size();
  j["entries"] = m.entries;
  return render(j);
}

MeanMatrix mean_matrix_from_json(std::string_view text) {
  Json j = parse_document(text);
  MeanMatrix m{IntervalRadius(j.at("n").get<long long>()), BirthRate(number(j.at("lambda"))),
               number(j.at("t")), {}};
  for (const auto& e : j.at("entries")) m.entries.push_back(number(e));
  if (m.entries.size() != static_cast<std::size_t>(m.size()) * m.size()) {
    throw InvalidArgument("mean matrix entry count does not match its size");
  }
  return m;
}

std::string to_json(const SurvivalEstimate& s) {
  Json j = header();
  j["p_hat"] = s.p_hat;
  j["ci_low"] = s.ci_low;
  j["ci_high"] = s.ci_high;
  j["trials"] = s.trials;
  j["censored_fraction"] = s.censored_fraction;
  j["seed"] = s.seed;
  return render(j);
}

SurvivalEstimate survival_from_json(std::string_view text) {
  Json j = parse_document(text);
  SurvivalEstimate s;
  s.p_hat = number(j.at("p_hat"));
  s.ci_low = number(j.at("ci_low"));
  s.ci_high = number(j.at("ci_high"));
  s.trials = j.at("trials").get<std::uint64_t>();
  s.censored_fraction = number(j.at("censored_fraction"));
  s.seed = j.at("seed").get<std::uint64_t>();
  return s;
}

std::string to_json(const Genealogy& g) {
  Json j = header();
  j["lambda"] = g.lambda.value();
  j["t_max"] = g.t_max;
  j["truncated"] = g.truncated;
  j["complete_until"] = g.complete_until;
  Json arr = Json::array();
  for (const Individual& ind : g.individuals) {
    Json r;
    r["id"] = ind.id;
    r["parent_id"] = ind.parent ? Json(*ind.parent) : Json(nullptr);
    r["site"] = ind.site;
    r["birth_time"] = ind.birth_time;
    r["death_time"] = ind.death_time;
    r["birth_mark"] = ind.birth_mark ? Json(*ind.birth_mark) : Json(nullptr);
    arr.push_back(std::move(r));
  }
  j["individuals"] = std::move(arr);
  return render(j);
}

Genealogy genealogy_from_json(std::string_view text) {
  Json j = parse_document(text);
  Genealogy g;
  g.lambda = BirthRate(number(j.at("lambda")));
  g.t_max = number(j.at("t_max"));
  g.truncated = j.at("truncated").get<bool>();
  g.complete_until = number(j.at("complete_until"));
  for (const auto& r : j.at("individuals")) {
    Individual ind;
    ind.id = r.at("id").get<std::uint64_t>();
    if (!r.at("parent_id").is_null()) ind.parent = r.at("parent_id").get<std::uint64_t>();
    ind.site = r.at("site").get<Site>();
    ind.birth_time = number(r.at("birth_time"));
    ind.death_time = number(r.at("death_time"));
    if (!r.at("birth_mark").is_null()) ind.birth_mark = number(r.at("birth_mark"));
    g.individuals.push_back(ind);
  }
  return g;
}

std::string phase_csv(const std::vector<PhaseRow>& rows) {
  std::string out = "n,lambda_c,scaled_gap\n";
  for (const PhaseRow& r : rows) {
    out += std::to_string(r.n) + "," + format_number(r.lambda_c) + "," +
           format_number(r.scaled_gap) + "\n";
  }
  return out;
}

std::string mean_curve_csv(const MeanCurve& curve) {
  std::string out = "t,expected_total\n";
  for (std::size_t i = 0; i < curve.times.size(); ++i) {
    out += format_number(curve.times[i]) + "," + format_number(curve.expected_total[i]) + "\n";
  }
  return out;
}

TrajectoryCsvWriter::TrajectoryCsvWriter(std::ostream& out) : out_(out) {
  out_ << "time,site,count\n";
}

void TrajectoryCsvWriter::write(double time, Site site, Count count) {
  out_ << format_number(time) << ',' << site << ',' << count << '\n';
}

void TrajectoryCsvWriter::write(double time, const Configuration& config) {
  for (const auto& [site, c] : config.sites()) write(time, site, c);
}

}  // namespace brw

namespace brw {

std::string to_json(const AsymptoticReport& r) {
  Json j = header();
  Json rows = Json::array();
  for (const AsymptoticRow& row : r.rows) {
    rows.push_back(Json{{"n", row.n},
                        {"lambda_c", row.lambda_c},
                        {"scaled_gap", row.scaled_gap},
                        {"closed_form_lambda_c", row.closed_form_lambda_c}});
  }
  j["rows"] = std::move(rows);
  j["relative_change"] = r.relative_change;
  j["extrapolated_limit"] = r.extrapolated_limit;
  Json candidates = Json::array();
  for (const LimitCandidate& c : r.candidates) {
    candidates.push_back(
        Json{{"name", c.name}, {"value", c.value}, {"relative_error", c.relative_error}});
  }
  j["candidates"] = std::move(candidates);
  j["supported_constant"] = r.supported;
  j["closed_form_max_error"] = r.closed_form_max_error;
  return render(j);
}

AsymptoticReport asymptotic_report_from_json(std::string_view text) {
  Json j = parse_document(text);
  AsymptoticReport r;
  for (const auto& row : j.at("rows")) {
    r.rows.push_back({row.at("n").get<int>(), number(row.at("lambda_c")),
                      number(row.at("scaled_gap")), number(row.at("closed_form_lambda_c"))});
  }
  r.relative_change = number(j.at("relative_change"));
  r.extrapolated_limit = number(j.at("extrapolated_limit"));
  for (const auto& c : j.at("candidates")) {
    r.candidates.push_back({c.at("name").get<std::string>(), number(c.at("value")),
                            number(c.at("relative_error"))});
  }
  r.supported = j.at("supported_constant").get<std::string>();
  r.closed_form_max_error = number(j.at("closed_form_max_error"));
  return r;
}

std::string to_json(const CouplingReport& r, const CouplingConfig& config) {
  Json j = header();
  Json pairs = Json::array();
  for (auto [a, b] : config.lambda_pairs) pairs.push_back(Json::array({a, b}));
  Json npairs = Json::array();
  for (auto [a, b] : config.n_pairs) npairs.push_back(Json::array({a, b}));
  j["lambda_pairs"] = std::move(pairs);
  j["n_pairs"] = std::move(npairs);
  j["t_max"] = config.t_max;
  j["seed"] = config.seed;
  j["genealogies"] = r.genealogies;
  j["checks"] = r.checks;
  j["events_checked"] = r.events_checked;
  j["violations"] = r.violations;
  j["truncated_genealogies"] = r.truncated_genealogies;
  j["all_dominated"] = r.all_dominated();
  if (r.first_violation) {
    const CouplingViolation& v = *r.first_violation;
    j["first_violation"] = Json{{"check", v.check},
                                {"genealogy", v.genealogy},
                                {"time", v.at.time},
                                {"site", v.at.site},
                                {"lower", v.at.lower},
                                {"upper", v.at.upper}};
  } else {
    j["first_violation"] = nullptr;
  }
  return render(j);
}

CouplingReport coupling_report_from_json(std::string_view text) {
  Json j = parse_document(text);
  CouplingReport r;
  r.genealogies = j.at("genealogies").get<std::uint64_t>();
  r.checks = j.at("checks").get<std::uint64_t>();
  r.events_checked = j.at("events_checked").get<std::uint64_t>();
  r.violations = j.at("violations").get<std::uint64_t>();
  r.truncated_genealogies = j.at("truncated_genealogies").get<std::uint64_t>();
  const Json& v = j.at("first_violation");
  if (!v.is_null()) {
    r.first_violation = CouplingViolation{
        v.at("check").get<std::string>(), v.at("genealogy").get<std::uint64_t>(),
        DominationViolation{number(v.at("time")), v.at("site").get<Site>(),
                            v.at("lower").get<Count>(), v.at("upper").get<Count>()}};
  }
  return r;
}

std::string asymptotic_csv(const AsymptoticReport& r) {
  std::string out = "n,lambda_c,scaled_gap,closed_form_lambda_c\n";
  for (const AsymptoticRow& row : r.rows) {
    out += std::to_string(row.n) + "," + format_number(row.lambda_c) + "," +
           format_number(row.scaled_gap) + "," + format_number(row.closed_form_lambda_c) + "\n";
  }
  return out;
}

}  // namespace brw
