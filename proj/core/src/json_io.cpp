#include "qdiff/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "json.hpp"
#include "qdiff/errors.hpp"

namespace qdiff {

namespace {

using nlohmann::json;

// All emitted floats are rounded to 12 significant digits so repeated runs
// are byte-identical and diffs stay readable.
double round12(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("json: non-finite number");
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::strtod(buf, nullptr);
}

json j_num(double v) { return json(round12(v)); }

json j_complex(Complex z) { return json::array({j_num(z.real()), j_num(z.imag())}); }

json j_vertices(const std::vector<Complex>& vs) {
  json arr = json::array();
  for (Complex v : vs) arr.push_back(j_complex(v));
  return arr;
}

Complex parse_complex(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError(std::string(what) + ": expected [re, im]");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

json parse_text(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ParseError("invalid JSON");
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json j_termination(const Termination& t) {
  json j;
  switch (t.kind) {
    case TerminationKind::HitCriticalPoint:
      j["kind"] = "hit_critical_point";
      j["point"] = j_complex(t.point);
      break;
    case TerminationKind::EscapedToInfinity:
      j["kind"] = "escaped_to_infinity";
      j["direction_index"] = t.direction_index;
      break;
    case TerminationKind::ClosedLoop:
      j["kind"] = "closed_loop";
      break;
    case TerminationKind::Budget:
      j["kind"] = "budget";
      break;
  }
  return j;
}

json j_trajectory(const Trajectory& t) {
  json j;
  j["vertices"] = j_vertices(t.vertices);
  j["phi_length"] = j_num(t.phi_length);
  j["termination"] = j_termination(t.termination);
  j["kind"] = t.kind == FoliationKind::Horizontal ? "horizontal" : "vertical";
  return j;
}

json j_signature(const HomotopySignature& s) {
  json arr = json::array();
  for (auto b : s.parities) arr.push_back(static_cast<int>(b));
  return arr;
}

}  // namespace

std::string to_json(const FactoredRational& q) {
  json j;
  j["coefficient"] = j_complex(q.coefficient());
  json factors = json::array();
  for (const auto& f : q.factors()) {
    json jf;
    jf["root"] = j_complex(f.root);
    jf["mult"] = f.multiplicity;
    factors.push_back(jf);
  }
  j["factors"] = factors;
  return dump(j);
}

FactoredRational rational_from_json(const std::string& text) {
  json j = parse_text(text);
  if (!j.is_object() || !j.contains("coefficient") || !j.contains("factors"))
    throw ParseError("rational: expected {coefficient, factors}");
  Complex coeff = parse_complex(j["coefficient"], "coefficient");
  if (!j["factors"].is_array()) throw ParseError("rational: factors must be an array");
  std::vector<Factor> factors;
  for (const auto& jf : j["factors"]) {
    if (!jf.is_object() || !jf.contains("root") || !jf.contains("mult") ||
        !jf["mult"].is_number_integer())
      throw ParseError("rational: each factor needs {root, mult}");
    factors.push_back({parse_complex(jf["root"], "factor root"), jf["mult"].get<int>()});
  }
  try {
    return FactoredRational(coeff, std::move(factors));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("rational: ") + e.what());
  }
}

std::string to_json(const Trajectory& t) { return dump(j_trajectory(t)); }

std::string to_json(const CriticalGraph& g) {
  json j;
  json points = json::array();
  for (const auto& p : g.points) {
    json jp;
    jp["point"] = j_complex(p.location.value());
    jp["order"] = p.order;
    points.push_back(jp);
  }
  j["points"] = points;
  j["sources"] = g.sources;
  json rays = json::array();
  for (const auto& r : g.rays) {
    json jr;
    jr["source"] = r.source;
    jr["emanation"] = r.emanation;
    jr["trajectory"] = j_trajectory(r.trajectory);
    rays.push_back(jr);
  }
  j["rays"] = rays;
  json adj = json::array();
  for (const auto& [key, ray_ids] : g.adjacency) {
    json ja;
    ja["a"] = key.first;
    ja["b"] = key.second;
    ja["rays"] = ray_ids;
    adj.push_back(ja);
  }
  j["adjacency"] = adj;
  return dump(j);
}

std::string to_json(const ShortTrajectoryReport& r) {
  json j;
  j["found"] = r.found;
  j["resolved"] = r.resolved;
  j["distance"] = j_num(r.distance);
  j["hit_radius_used"] = j_num(r.hit_radius_used);
  j["trajectory"] = r.trajectory ? j_trajectory(*r.trajectory) : json(nullptr);
  j["unbroken"] = r.unbroken ? json(*r.unbroken) : json(nullptr);
  j["signature"] = r.signature ? j_signature(*r.signature) : json(nullptr);
  return dump(j);
}

std::string to_json(const OrientedArc& arc) {
  json j;
  j["vertices"] = j_vertices(arc.vertices);
  j["side"] = arc.side == Side::Plus ? "plus" : arc.side == Side::Minus ? "minus" : "off";
  return dump(j);
}

OrientedArc arc_from_json(const std::string& text) {
  json j = parse_text(text);
  if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array())
    throw ParseError("arc: expected {vertices, side}");
  OrientedArc arc;
  for (const auto& jv : j["vertices"]) arc.vertices.push_back(parse_complex(jv, "arc vertex"));
  std::string side = j.value("side", "off");
  if (side == "plus") arc.side = Side::Plus;
  else if (side == "minus") arc.side = Side::Minus;
  else if (side == "off") arc.side = Side::Off;
  else throw ParseError("arc: side must be plus|minus|off");
  return arc;
}

std::string to_json(const QuantizationResult& r) {
  json j;
  j["value"] = j_complex(r.value);
  j["matched"] = r.matched ? j_complex(*r.matched) : json(nullptr);
  json adm = json::array();
  for (Complex m : r.admissible) adm.push_back(j_complex(m));
  j["admissible"] = adm;
  if (r.endpoint_value_plus) j["endpoint_value_plus"] = j_complex(*r.endpoint_value_plus);
  if (r.endpoint_value_minus) j["endpoint_value_minus"] = j_complex(*r.endpoint_value_minus);
  if (r.endpoints_ok) j["endpoints_ok"] = *r.endpoints_ok;
  return dump(j);
}

std::string to_json(const ConditionReport& r) {
  json j;
  j["value"] = j_complex(r.value);
  j["real_part"] = j_num(r.real_part);
  j["passes"] = r.passes;
  return dump(j);
}

std::string to_json(const SweepResult& r) {
  json j;
  json samples = json::array();
  for (const auto& s : r.samples) {
    json js;
    js["t"] = j_num(s.t);
    js["param_a"] = j_complex(s.param_a);
    js["param_b"] = j_complex(s.param_b);
    json jr;
    jr["found"] = s.report.found;
    jr["resolved"] = s.report.resolved;
    jr["distance"] = j_num(s.report.distance);
    jr["signature"] = s.report.signature ? j_signature(*s.report.signature) : json(nullptr);
    js["report"] = jr;
    samples.push_back(js);
  }
  j["samples"] = samples;
  j["dichotomy_ok"] = r.dichotomy_ok;
  j["signature_constant"] = r.signature_constant;
  return dump(j);
}

PolygonData polygon_from_json(const std::string& text) {
  json j = parse_text(text);
  if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array())
    throw ParseError("polygon: expected {vertices, interior_orders}");
  PolygonData p;
  for (const auto& jv : j["vertices"]) {
    if (!jv.is_object() || !jv.contains("order") || !jv.contains("angle"))
      throw ParseError("polygon: each vertex needs {order, angle}");
    p.vertices.push_back({jv["order"].get<int>(), jv["angle"].get<double>()});
  }
  if (j.contains("interior_orders")) {
    if (!j["interior_orders"].is_array())
      throw ParseError("polygon: interior_orders must be an array");
    for (const auto& ji : j["interior_orders"]) p.interior_orders.push_back(ji.get<int>());
  }
  return p;
}

std::string to_json(const OverlayReport& r) {
  json j;
  j["fraction"] = j_num(r.fraction);
  j["empty_input"] = r.empty_input;
  j["count_inside"] = r.count_inside;
  j["count_total"] = r.count_total;
  return dump(j);
}

}  // namespace qdiff
