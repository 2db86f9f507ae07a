#include "valign/protocol_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace valign {

using nlohmann::json;

std::string protocol_to_json(const Protocol& p) {
  json j;
  j["vocabulary"] = p.vocabulary;
  j["bound"] = p.bound;
  j["constraints"] = json::array();
  for (const Constraint& c : p.constraints) {
    json jc;
    jc["template"] = std::string(template_name(c.kind));
    if (is_unary(c.kind)) jc["n"] = c.count;
    jc["a"] = format_atom(c.a);
    if (!is_unary(c.kind)) jc["b"] = format_atom(c.b);
    j["constraints"].push_back(std::move(jc));
  }
  return j.dump(2) + "\n";
}

Protocol protocol_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ProtocolError(std::string("invalid protocol JSON: ") + e.what());
  }
  Protocol p;
  try {
    p.vocabulary = j.at("vocabulary").get<std::vector<Word>>();
    p.bound = j.at("bound").get<unsigned>();
    for (const json& jc : j.at("constraints")) {
      const auto name = jc.at("template").get<std::string>();
      auto kind = template_from_name(name);
      if (!kind) throw ProtocolError("unknown template '" + name + "'");
      Atom a = parse_atom(jc.at("a").get<std::string>());
      if (is_unary(*kind)) {
        const unsigned n = jc.at("n").get<unsigned>();
        p.constraints.push_back(*kind == Template::existence ? Constraint::existence(n, std::move(a))
                                                             : Constraint::absence(n, std::move(a)));
      } else {
        p.constraints.push_back(Constraint::binary(*kind, std::move(a), parse_atom(jc.at("b").get<std::string>())));
      }
    }
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("malformed protocol: ") + e.what());
  } catch (const ConstraintError& e) {
    throw ProtocolError(std::string("malformed constraint: ") + e.what());
  }
  p.validate();
  return p;
}

Protocol load_protocol(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ProtocolError("cannot open protocol file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return protocol_from_json(buffer.str());
}

void save_protocol(const Protocol& p, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ProtocolError("cannot write protocol file " + path.string());
  out << protocol_to_json(p);
}

namespace {

std::string trimmed(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::vector<AlignmentLine> read_alignment_lines(std::istream& in) {
  std::vector<AlignmentLine> lines;
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    const std::string line = trimmed(raw);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trimmed(field));
    if (fields.size() < 2 || fields.size() > 3 || fields[0].empty() || fields[1].empty()) {
      throw ProtocolError("alignment line " + std::to_string(number) + ": expected foreign,own[,value]");
    }
    AlignmentLine entry{fields[0], fields[1], std::nullopt};
    if (fields.size() == 3) {
      try {
        std::size_t used = 0;
        entry.value = std::stod(fields[2], &used);
        if (used != fields[2].size()) throw std::invalid_argument(fields[2]);
      } catch (const std::exception&) {
        throw ProtocolError("alignment line " + std::to_string(number) + ": bad value '" + fields[2] + "'");
      }
    }
    lines.push_back(std::move(entry));
  }
  return lines;
}

void write_alignment_lines(std::ostream& out, const std::vector<AlignmentLine>& lines) {
  for (const auto& l : lines) {
    out << l.foreign << ',' << l.own;
    if (l.value) {
      std::ostringstream v;
      v.precision(17);
      v << *l.value;
      out << ',' << v.str();
    }
    out << '\n';
  }
}

AlignmentRelation load_alignment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ProtocolError("cannot open alignment file " + path.string());
  AlignmentRelation a;
  for (auto& l : read_alignment_lines(in)) a.insert(std::move(l.foreign), std::move(l.own));
  return a;
}

void save_alignment(const AlignmentRelation& a, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ProtocolError("cannot write alignment file " + path.string());
  std::vector<AlignmentLine> lines;
  for (const auto& [foreign, own] : a.pairs()) lines.push_back({foreign, own, std::nullopt});
  write_alignment_lines(out, lines);
}

}  // namespace valign
