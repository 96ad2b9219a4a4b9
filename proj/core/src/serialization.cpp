#include "cqcode/serialization.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cqcode {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("JSON parse error: ") + e.what());
  }
}

DensityMat state_from_json(const json& rows, int out_dim) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != out_dim) {
    throw ParseError("state: expected " + std::to_string(out_dim) + " rows");
  }
  Mat m(out_dim, out_dim);
  for (int i = 0; i < out_dim; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != out_dim) {
      throw ParseError("state: ragged row " + std::to_string(i));
    }
    for (int j = 0; j < out_dim; ++j) {
      const auto& cell = row[static_cast<std::size_t>(j)];
      if (!cell.is_array() || cell.size() != 2) {
        throw ParseError("state: entries must be [re, im]");
      }
      m(i, j) = Cplx(cell[0].get<double>(), cell[1].get<double>());
    }
  }
  try {
    return DensityMat(HermMat(std::move(m)));
  } catch (const std::exception& e) {
    throw ParseError(std::string("state: ") + e.what());
  }
}

json state_to_json(const DensityMat& s) {
  json rows = json::array();
  for (int i = 0; i < s.dim(); ++i) {
    json row = json::array();
    for (int j = 0; j < s.dim(); ++j) {
      row.push_back({s.raw()(i, j).real(), s.raw()(i, j).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

AnyChannel channel_from_json(const json& j) {
  const std::string kind = j.value("kind", "");
  const int out_dim = j.value("out_dim", 0);
  if (out_dim <= 0) throw ParseError("channel: missing/invalid out_dim");
  if (!j.contains("states") || !j["states"].is_array()) {
    throw ParseError("channel: missing states");
  }
  std::vector<DensityMat> states;
  states.reserve(j["states"].size());
  for (const auto& s : j["states"]) states.push_back(state_from_json(s, out_dim));
  if (kind == "cq") {
    const int a = j.value("a_size", static_cast<int>(states.size()));
    return CQChannel(a, std::move(states));
  }
  if (kind == "mac") {
    const int a = j.value("a_size", 0), b = j.value("b_size", 0);
    if (a <= 0 || b <= 0) throw ParseError("mac channel: missing a_size/b_size");
    return MACChannel(a, b, std::move(states));
  }
  throw ParseError("channel: kind must be \"cq\" or \"mac\"");
}

json channel_to_json(const CQChannel& w) {
  json j;
  j["kind"] = "cq";
  j["a_size"] = w.input_size;
  j["out_dim"] = w.out_dim;
  json states = json::array();
  for (const auto& s : w.states) states.push_back(state_to_json(s));
  j["states"] = std::move(states);
  return j;
}

json channel_to_json(const MACChannel& w) {
  json j;
  j["kind"] = "mac";
  j["a_size"] = w.a_size;
  j["b_size"] = w.b_size;
  j["out_dim"] = w.out_dim;
  json states = json::array();
  for (const auto& s : w.states) states.push_back(state_to_json(s));
  j["states"] = std::move(states);
  return j;
}

BCDPair bcd_from_json(const json& j) {
  if (!j.contains("w_y") || !j.contains("w_z")) throw ParseError("bcd member: needs w_y and w_z");
  auto y = channel_from_json(j["w_y"]);
  auto z = channel_from_json(j["w_z"]);
  if (!std::holds_alternative<CQChannel>(y) || !std::holds_alternative<CQChannel>(z)) {
    throw ParseError("bcd member: w_y and w_z must be cq channels");
  }
  return BCDPair(std::get<CQChannel>(std::move(y)), std::get<CQChannel>(std::move(z)));
}

}  // namespace

AnyChannel channel_from_json_text(const std::string& text) {
  return channel_from_json(parse(text));
}

std::string channel_to_json_text(const CQChannel& w) { return channel_to_json(w).dump(1); }
std::string channel_to_json_text(const MACChannel& w) { return channel_to_json(w).dump(1); }

CompoundFamily family_from_json_text(const std::string& text) {
  const json j = parse(text);
  const std::string kind = j.value("kind", "");
  if (kind == "cq" || kind == "mac") {
    auto ch = channel_from_json(j);
    if (std::holds_alternative<MACChannel>(ch)) {
      return CompoundFamily::of_mac({std::get<MACChannel>(std::move(ch))});
    }
    throw ParseError("family: a bare cq channel is not a family");
  }
  if (kind == "bcd") return CompoundFamily::of_bcd({bcd_from_json(j)});
  if (kind != "compound") throw ParseError("family: kind must be \"compound\"");
  const std::string fk = j.value("family_kind", "");
  if (!j.contains("members") || !j["members"].is_array() || j["members"].empty()) {
    throw ParseError("family: missing members");
  }
  if (fk == "mac") {
    std::vector<MACChannel> members;
    for (const auto& m : j["members"]) {
      auto ch = channel_from_json(m);
      if (!std::holds_alternative<MACChannel>(ch)) throw ParseError("family: member not mac");
      members.push_back(std::get<MACChannel>(std::move(ch)));
    }
    return CompoundFamily::of_mac(std::move(members));
  }
  if (fk == "bcd") {
    std::vector<BCDPair> members;
    for (const auto& m : j["members"]) members.push_back(bcd_from_json(m));
    return CompoundFamily::of_bcd(std::move(members));
  }
  throw ParseError("family: family_kind must be \"mac\" or \"bcd\"");
}

std::string family_to_json_text(const CompoundFamily& fam) {
  json j;
  j["kind"] = "compound";
  json members = json::array();
  if (fam.kind == FamilyKind::mac) {
    j["family_kind"] = "mac";
    for (const auto& m : fam.mac_members) members.push_back(channel_to_json(m));
  } else {
    j["family_kind"] = "bcd";
    for (const auto& m : fam.bcd_members) {
      json e;
      e["w_y"] = channel_to_json(m.w_y);
      e["w_z"] = channel_to_json(m.w_z);
      members.push_back(std::move(e));
    }
  }
  j["members"] = std::move(members);
  return j.dump(1);
}

MarkovTriple triple_from_json_text(const std::string& text) {
  const json j = parse(text);
  if (!j.contains("p_t") || !j.contains("p_a_t")) {
    throw ParseError("distribution: needs p_t and p_a_t");
  }
  auto vec = [](const json& a) { return a.get<std::vector<double>>(); };
  std::vector<Dist> a_rows, b_rows;
  try {
    Dist p_t(vec(j["p_t"]));
    for (const auto& r : j["p_a_t"]) a_rows.emplace_back(vec(r));
    if (j.contains("p_b_t")) {
      for (const auto& r : j["p_b_t"]) b_rows.emplace_back(vec(r));
    } else {
      b_rows.assign(static_cast<std::size_t>(p_t.size()), Dist({1.0}));
    }
    return MarkovTriple(std::move(p_t), std::move(a_rows), std::move(b_rows));
  } catch (const DomainError& e) {
    throw ParseError(std::string("distribution: ") + e.what());
  } catch (const ShapeError& e) {
    throw ParseError(std::string("distribution: ") + e.what());
  }
}

std::string triple_to_json_text(const MarkovTriple& m) {
  json j;
  j["p_t"] = m.p_t.probs;
  json a = json::array(), b = json::array();
  for (const auto& r : m.p_a_given_t) a.push_back(r.probs);
  for (const auto& r : m.p_b_given_t) b.push_back(r.probs);
  j["p_a_t"] = std::move(a);
  j["p_b_t"] = std::move(b);
  return j.dump(1);
}

std::string packed_code_to_json_text(const PackedCode& code) {
  json j;
  j["n"] = code.n;
  j["seed"] = code.seed;
  j["slack_c"] = code.slack_c;
  j["margins"] = code.margins;
  switch (code.setting) {
    case PackedCode::Setting::single: {
      j["setting"] = "single";
      j["rate"] = code.rate;
      j["alphabet"] = code.alphabet;
      j["codewords"] = code.codewords;
      break;
    }
    case PackedCode::Setting::superposition: {
      j["setting"] = "superposition";
      j["rate_u"] = code.rate_u;
      j["rate_x"] = code.rate_x;
      j["u_alphabet"] = code.u_alphabet;
      j["x_alphabet"] = code.x_alphabet;
      j["cloud"] = code.cloud;
      j["satellites"] = code.satellites;
      // flattened view: cloud words then satellites, j-major
      json flat = json::array();
      for (const auto& u : code.cloud) flat.push_back(u);
      for (const auto& sats : code.satellites)
        for (const auto& x : sats) flat.push_back(x);
      j["codewords"] = std::move(flat);
      break;
    }
    case PackedCode::Setting::mac: {
      j["setting"] = "mac";
      j["rate_a"] = code.rate_a;
      j["rate_b"] = code.rate_b;
      j["a_alphabet"] = code.a_alphabet;
      j["b_alphabet"] = code.b_alphabet;
      j["t_seq"] = code.t_seq;
      j["a_words"] = code.a_words;
      j["b_words"] = code.b_words;
      json flat = json::array();
      for (const auto& a : code.a_words) flat.push_back(a);
      for (const auto& b : code.b_words) flat.push_back(b);
      j["codewords"] = std::move(flat);
      break;
    }
  }
  return j.dump(1);
}

PackedCode packed_code_from_json_text(const std::string& text) {
  const json j = parse(text);
  PackedCode code;
  const std::string setting = j.value("setting", "");
  code.n = j.value("n", 0);
  code.seed = j.value("seed", std::uint64_t{0});
  code.slack_c = j.value("slack_c", 1.0);
  if (j.contains("margins")) {
    for (const auto& [k, v] : j["margins"].items()) code.margins[k] = v.get<double>();
  }
  auto words = [](const json& a) { return a.get<std::vector<std::vector<int>>>(); };
  if (setting == "single") {
    code.setting = PackedCode::Setting::single;
    code.rate = j.value("rate", 0.0);
    code.alphabet = j.value("alphabet", 0);
    code.codewords = words(j.at("codewords"));
  } else if (setting == "superposition") {
    code.setting = PackedCode::Setting::superposition;
    code.rate_u = j.value("rate_u", 0.0);
    code.rate_x = j.value("rate_x", 0.0);
    code.u_alphabet = j.value("u_alphabet", 0);
    code.x_alphabet = j.value("x_alphabet", 0);
    code.cloud = words(j.at("cloud"));
    code.satellites = j.at("satellites").get<std::vector<std::vector<std::vector<int>>>>();
  } else if (setting == "mac") {
    code.setting = PackedCode::Setting::mac;
    code.rate_a = j.value("rate_a", 0.0);
    code.rate_b = j.value("rate_b", 0.0);
    code.a_alphabet = j.value("a_alphabet", 0);
    code.b_alphabet = j.value("b_alphabet", 0);
    code.t_seq = j.at("t_seq").get<std::vector<int>>();
    for (std::size_t i = 1; i < code.t_seq.size(); ++i) {
      if (code.t_seq[i] < code.t_seq[i - 1]) {
        throw ParseError("packed code: t_seq must be in sorted block form");
      }
    }
    code.a_words = words(j.at("a_words"));
    code.b_words = words(j.at("b_words"));
  } else {
    throw ParseError("packed code: unknown setting");
  }
  return code;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write file: " + path);
  out << content;
}

}  // namespace cqcode
