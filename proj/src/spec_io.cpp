#include "cfrelay/spec_io.hpp"

#include <fstream>
#include <sstream>

#include "cfrelay/error.hpp"

namespace cfrelay {

using nlohmann::json;

namespace {

[[noreturn]] void parse_error(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::Parse, "field '" + field + "': " + what);
}

const json& require(const json& doc, const std::string& field) {
  auto it = doc.find(field);
  if (it == doc.end()) parse_error(field, "missing");
  return *it;
}

int read_int(const json& v, const std::string& field) {
  if (!v.is_number_integer()) parse_error(field, "expected an integer");
  return v.get<int>();
}

double read_number(const json& v, const std::string& field) {
  if (!v.is_number()) parse_error(field, "expected a number");
  return v.get<double>();
}

std::vector<int> read_int_array(const json& v, const std::string& field) {
  if (!v.is_array()) parse_error(field, "expected an array of integers");
  std::vector<int> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    out.push_back(read_int(v[k], field + "[" + std::to_string(k) + "]"));
  }
  return out;
}

std::vector<double> read_number_array(const json& v, const std::string& field) {
  if (!v.is_array()) parse_error(field, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    out.push_back(read_number(v[k], field + "[" + std::to_string(k) + "]"));
  }
  return out;
}

std::vector<std::vector<double>> read_nested(const json& v, const std::string& field) {
  if (!v.is_array()) parse_error(field, "expected an array of arrays");
  std::vector<std::vector<double>> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    out.push_back(read_number_array(v[k], field + "[" + std::to_string(k) + "]"));
  }
  return out;
}

}  // namespace

ChannelSpec spec_from_json(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::Parse, "spec document must be a JSON object");
  ChannelSpec s;
  const json& mode = require(doc, "mode");
  if (!mode.is_string()) parse_error("mode", "expected \"full\" or \"digital\"");
  const auto m = mode.get<std::string>();
  if (m == "full") {
    s.mode = Mode::Full;
  } else if (m == "digital") {
    s.mode = Mode::Digital;
  } else {
    parse_error("mode", "expected \"full\" or \"digital\", found \"" + m + "\"");
  }
  s.n = read_int(require(doc, "n"), "n");
  s.alphabet_x = read_int(require(doc, "alphabet_x"), "alphabet_x");
  s.alphabet_y = read_int(require(doc, "alphabet_y"), "alphabet_y");
  s.alphabet_yi = read_int_array(require(doc, "alphabet_yi"), "alphabet_yi");
  s.alphabet_yhat_i = read_int_array(require(doc, "alphabet_yhat_i"), "alphabet_yhat_i");
  s.channel = read_number_array(require(doc, "channel"), "channel");
  s.p_x = read_number_array(require(doc, "p_x"), "p_x");
  s.compressions = read_nested(require(doc, "compressions"), "compressions");

  // Mode-specific fields are required in their own mode; if present in the other
  // mode they are read anyway so validate() can name them.
  const bool full = s.mode == Mode::Full;
  if (full || doc.contains("alphabet_xi")) {
    s.alphabet_xi = read_int_array(require(doc, "alphabet_xi"), "alphabet_xi");
  }
  if (full || doc.contains("p_xi")) s.p_xi = read_nested(require(doc, "p_xi"), "p_xi");
  if (!full || doc.contains("link_capacities")) {
    s.link_capacities = read_number_array(require(doc, "link_capacities"), "link_capacities");
  }
  return s;
}

json spec_to_json(const ChannelSpec& s) {
  json j;
  j["mode"] = s.mode == Mode::Full ? "full" : "digital";
  j["n"] = s.n;
  j["alphabet_x"] = s.alphabet_x;
  j["alphabet_y"] = s.alphabet_y;
  if (s.mode == Mode::Full) j["alphabet_xi"] = s.alphabet_xi;
  j["alphabet_yi"] = s.alphabet_yi;
  j["alphabet_yhat_i"] = s.alphabet_yhat_i;
  j["channel"] = s.channel;
  j["p_x"] = s.p_x;
  if (s.mode == Mode::Full) j["p_xi"] = s.p_xi;
  j["compressions"] = s.compressions;
  if (s.mode == Mode::Digital) j["link_capacities"] = s.link_capacities;
  return j;
}

ChannelSpec parse_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Parse, std::string("malformed JSON: ") + e.what());
  }
  return spec_from_json(doc);
}

ChannelSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::Io, "cannot read '" + path + "'");
  return parse_spec(buf.str());
}

void save_spec_file(const ChannelSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  out << spec_to_json(spec).dump(2) << "\n";
  if (!out) throw Error(ErrorCode::Io, "write to '" + path + "' failed");
}

}  // namespace cfrelay
