#include "spikegraph/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace spikegraph {

namespace {

using nlohmann::json;

// Non-finite doubles have no JSON number representation; emit them as
// strings so reports stay lossless.
json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

json json_bound(const BoundValue& b) {
  return json{{"raw", json_number(b.raw)},
              {"clamped", json_number(b.clamped)},
              {"vacuous", b.vacuous}};
}

[[noreturn]] void parse_fail(const std::string& where, std::int64_t line,
                             const std::string& what) {
  std::ostringstream os;
  os << where;
  if (line > 0) os << ":" << line;
  os << ": " << what;
  throw ParseError(os.str());
}

double require_number(const json& doc, const char* key,
                      const std::string& where) {
  if (!doc.contains(key))
    parse_fail(where, 0, std::string("missing key \"") + key + "\"");
  const json& v = doc.at(key);
  if (!v.is_number())
    parse_fail(where, 0, std::string("key \"") + key + "\" must be a number");
  return v.get<double>();
}

std::string require_string(const json& doc, const char* key,
                           const std::string& where) {
  if (!doc.contains(key))
    parse_fail(where, 0, std::string("missing key \"") + key + "\"");
  const json& v = doc.at(key);
  if (!v.is_string())
    parse_fail(where, 0, std::string("key \"") + key + "\" must be a string");
  return v.get<std::string>();
}

RateFunction rate_from_json(const json& doc, const std::string& where) {
  if (!doc.is_object()) parse_fail(where, 0, "rate entry must be an object");
  std::string family = require_string(doc, "family", where);
  double p_star = require_number(doc, "p_star", where);
  if (family == "clipped-sigmoid") {
    return RateFunction::clipped_sigmoid(p_star,
                                         require_number(doc, "beta", where));
  }
  if (family == "clipped-linear") {
    return RateFunction::clipped_linear(p_star,
                                        require_number(doc, "slope", where),
                                        require_number(doc, "intercept", where));
  }
  parse_fail(where, 0, "rate family must be clipped-sigmoid or clipped-linear");
}

PulseKernel pulse_from_json(const json& doc, const std::string& where) {
  if (!doc.is_object()) parse_fail(where, 0, "pulse entry must be an object");
  std::string family = require_string(doc, "family", where);
  if (family == "geometric")
    return PulseKernel::geometric(require_number(doc, "lambda", where));
  if (family == "power")
    return PulseKernel::power(require_number(doc, "q", where));
  parse_fail(where, 0, "pulse family must be geometric or power");
}

json rate_to_json(const RateFunction& r) {
  if (r.family == RateFamily::ClippedSigmoid) {
    return json{{"family", "clipped-sigmoid"},
                {"p_star", r.p_star},
                {"beta", r.beta}};
  }
  return json{{"family", "clipped-linear"},
              {"p_star", r.p_star},
              {"slope", r.slope},
              {"intercept", r.intercept}};
}

json pulse_to_json(const PulseKernel& k) {
  if (k.family == PulseFamily::Geometric)
    return json{{"family", "geometric"}, {"lambda", k.lambda}};
  return json{{"family", "power"}, {"q", k.q}};
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

NetworkSpec spec_from_json(const nlohmann::json& doc,
                           const std::string& where) {
  if (!doc.is_object()) parse_fail(where, 0, "top level must be an object");
  NetworkSpec spec;
  double n = require_number(doc, "neurons", where);
  if (n < 1 || n != std::floor(n))
    parse_fail(where, 0, "\"neurons\" must be a positive integer");
  spec.neuron_count = static_cast<int>(n);

  if (!doc.contains("weights"))
    parse_fail(where, 0, "missing key \"weights\"");
  const json& w = doc.at("weights");
  if (!w.is_array())
    parse_fail(where, 0, "\"weights\" must be an array");
  std::size_t expect = static_cast<std::size_t>(spec.neuron_count) *
                       static_cast<std::size_t>(spec.neuron_count);
  if (w.size() != expect) {
    std::ostringstream os;
    os << "\"weights\" must have " << expect << " entries, got " << w.size();
    parse_fail(where, 0, os.str());
  }
  spec.weights.reserve(expect);
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (!w[k].is_number()) {
      std::ostringstream os;
      os << "weights[" << k << "] must be a number";
      parse_fail(where, 0, os.str());
    }
    spec.weights.push_back(w[k].get<double>());
  }

  if (!doc.contains("rate")) parse_fail(where, 0, "missing key \"rate\"");
  const json& rate = doc.at("rate");
  if (rate.is_array()) {
    if (rate.size() != static_cast<std::size_t>(spec.neuron_count))
      parse_fail(where, 0, "\"rate\" array must have one entry per neuron");
    for (const json& r : rate) spec.rate.push_back(rate_from_json(r, where));
  } else {
    spec.rate.push_back(rate_from_json(rate, where));
  }

  if (!doc.contains("pulse")) parse_fail(where, 0, "missing key \"pulse\"");
  const json& pulse = doc.at("pulse");
  if (pulse.is_array()) {
    if (pulse.size() != static_cast<std::size_t>(spec.neuron_count))
      parse_fail(where, 0, "\"pulse\" array must have one entry per neuron");
    for (const json& p : pulse) spec.pulse.push_back(pulse_from_json(p, where));
  } else {
    spec.pulse.push_back(pulse_from_json(pulse, where));
  }
  return spec;
}

nlohmann::json spec_to_json(const NetworkSpec& spec) {
  json doc;
  doc["neurons"] = spec.neuron_count;
  doc["weights"] = spec.weights;
  if (spec.rate.size() == 1) {
    doc["rate"] = rate_to_json(spec.rate[0]);
  } else {
    json arr = json::array();
    for (const RateFunction& r : spec.rate) arr.push_back(rate_to_json(r));
    doc["rate"] = arr;
  }
  if (spec.pulse.size() == 1) {
    doc["pulse"] = pulse_to_json(spec.pulse[0]);
  } else {
    json arr = json::array();
    for (const PulseKernel& p : spec.pulse) arr.push_back(pulse_to_json(p));
    doc["pulse"] = arr;
  }
  return doc;
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    parse_fail(path, 0, e.what());
  }
  return doc;
}

void save_json(const nlohmann::json& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot create " + path);
  out << doc.dump(2) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

void save_text(const std::string& text, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot create " + path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

NetworkSpec load_spec(const std::string& path) {
  return spec_from_json(load_json(path), path);
}

void save_spec(const NetworkSpec& spec, const std::string& path) {
  save_json(spec_to_json(spec), path);
}

SpikeRaster load_raster(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) parse_fail(path, 1, "empty file");

  SpikeRaster raster;
  {
    std::stringstream header(line);
    std::string cell;
    std::int64_t field = 0;
    while (std::getline(header, cell, ',')) {
      ++field;
      int id = 0;
      auto res = std::from_chars(cell.data(), cell.data() + cell.size(), id);
      if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
        std::ostringstream os;
        os << "header field " << field << " is not an integer neuron id: \""
           << cell << "\"";
        parse_fail(path, 1, os.str());
      }
      if (!raster.neurons.empty() && id <= raster.neurons.back())
        parse_fail(path, 1, "header ids must be strictly increasing");
      raster.neurons.push_back(id);
    }
  }
  if (raster.neurons.empty()) parse_fail(path, 1, "header has no neuron ids");

  std::size_t m = raster.neurons.size();
  std::int64_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() && in.eof()) break;
    std::size_t col = 0;
    std::size_t pos = 0;
    while (true) {
      std::size_t comma = line.find(',', pos);
      std::string cell = line.substr(
          pos, comma == std::string::npos ? std::string::npos : comma - pos);
      ++col;
      if (cell != "0" && cell != "1") {
        std::ostringstream os;
        os << "field " << col << " must be 0 or 1, got \"" << cell << "\"";
        parse_fail(path, line_no, os.str());
      }
      raster.bits.push_back(cell == "1" ? 1 : 0);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (col != m) {
      std::ostringstream os;
      os << "expected " << m << " fields, got " << col;
      parse_fail(path, line_no, os.str());
    }
  }
  raster.n = static_cast<std::int64_t>(raster.bits.size() / m);
  return raster;
}

void save_raster(const SpikeRaster& raster, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot create " + path);
  std::string buf;
  for (std::size_t c = 0; c < raster.neurons.size(); ++c) {
    if (c) buf.push_back(',');
    buf += std::to_string(raster.neurons[c]);
  }
  buf.push_back('\n');
  int m = raster.columns();
  for (std::int64_t t = 1; t <= raster.n; ++t) {
    for (int c = 0; c < m; ++c) {
      if (c) buf.push_back(',');
      buf.push_back(raster.at(t, c) ? '1' : '0');
    }
    buf.push_back('\n');
    if (buf.size() > 1 << 20) {
      out << buf;
      buf.clear();
    }
  }
  out << buf;
  if (!out) throw IoError("write failed: " + path);
}

void save_table(const ContextTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot create " + path);
  out << "ell,w,n0,n1\n";
  for (const ContextKey& key : table.sorted_keys()) {
    const CountPair& c = table.counts.at(key);
    out << key.ell << "," << key_bit_string(key, table.others) << ","
        << c.no_spike << "," << c.spike << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

void save_graph(const EstimatedGraph& graph, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot create " + path);
  out << "source,target,delta,epsilon_used,selected\n";
  for (const GraphEntry& e : graph.entries) {
    out << e.source << "," << e.target << "," << format_double(e.delta) << ","
        << format_double(e.epsilon_used) << "," << (e.selected ? 1 : 0)
        << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

nlohmann::json bound_report_to_json(const BoundReport& report) {
  const ModelConstants& c = report.constants;
  json constants{
      {"target", c.target},
      {"region", c.region},
      {"neighborhood", c.neighborhood},
      {"neighborhood_region", c.neighborhood_region},
      {"K", {{"lo", json_number(c.K.lo)}, {"hi", json_number(c.K.hi)}}},
      {"K_region",
       {{"lo", json_number(c.K_region.lo)},
        {"hi", json_number(c.K_region.hi)}}},
      {"m", c.m ? json(json_number(*c.m)) : json(nullptr)},
      {"m_region",
       c.m_region ? json(json_number(*c.m_region)) : json(nullptr)},
      {"m_clipped", c.m_clipped},
      {"m_region_clipped", c.m_region_clipped},
      {"sigma_region", json_number(c.sigma_region)},
      {"gamma", json_number(c.gamma)},
      {"r", json_number(c.r)},
      {"p_star_min", json_number(c.p_star_min)},
      {"p_min", json_number(c.p_min)},
      {"q_star", json_number(c.q_star)},
      {"chi", json_number(c.alpha0.chi)},
      {"alpha0",
       {{"value", json_number(c.alpha0.alpha0)},
        {"norm", json_number(c.alpha0.norm_at_alpha0)},
        {"ok", c.alpha0.ok},
        {"error", c.alpha0.error}}},
      {"rho_envelope",
       {{"value", json_number(c.rho_envelope.value)},
        {"error", json_number(c.rho_envelope.error)},
        {"finite", c.rho_envelope.finite}}},
  };
  json rho = json::array();
  for (double v : c.rho) rho.push_back(json_number(v));
  constants["rho"] = rho;

  auto under_json = [](const BoundReport::Under& u) {
    return json{{"term1", json_number(u.terms.term1)},
                {"term2", json_number(u.terms.term2)},
                {"term2_valid", u.terms.term2_valid},
                {"total", json_bound(u.total)},
                {"available", u.available},
                {"reason", u.reason}};
  };

  json doc{
      {"inputs",
       {{"n", report.n},
        {"xi", report.xi},
        {"eps", report.eps},
        {"nu", report.nu}}},
      {"constants", constants},
      {"overestimation", json_bound(report.over)},
      {"underestimation", under_json(report.under)},
      {"coupling",
       {{"bound", json_bound(report.coupling.value)},
        {"branch", report.coupling.branch},
        {"available", report.coupling.available},
        {"error", report.coupling.error}}},
      {"overestimation_region", json_bound(report.over_region)},
      {"underestimation_region", under_json(report.under_region)},
  };
  if (report.hoeffding) {
    doc["hoeffding"] = json{{"lambda", report.hoeff_lambda},
                            {"ell", report.hoeff_ell},
                            {"bound", json_bound(*report.hoeffding)}};
  }
  return doc;
}

void save_bound_report(const BoundReport& report, const std::string& path) {
  save_json(bound_report_to_json(report), path);
}

}  // namespace spikegraph
