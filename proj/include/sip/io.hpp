#pragma once

// Instance files, JSON encoding of results and CSV rows.
//
// Instance file layout:
//   { "form": "eq" | "leq", "rows": n, "cols": m,
//     "entries": [[row, col, "value"], ...], "b": ["..."], "c": ["..."] }
// Values, b and c are decimal strings. Counts and indices may be JSON
// integers or decimal strings.

#include <sip/lp.hpp>

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace sip {

using json = nlohmann::ordered_json;

struct instance_error : argument_error {
  enum class Kind { MalformedJson, Schema, OutOfRange, ZeroEntry, Duplicate, Io };
  Kind kind;
  std::size_t line;  // 0 when unknown
  instance_error(Kind k, std::size_t l, const std::string& what)
      : argument_error(l ? "line " + std::to_string(l) + ": " + what : what), kind(k), line(l) {}
};

namespace detail {

inline std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

/// Line of the first occurrence of "key" followed by a colon.
inline std::size_t line_of_key(const std::string& text, const std::string& key) {
  const std::string quoted = "\"" + key + "\"";
  for (std::size_t pos = text.find(quoted); pos != std::string::npos; pos = text.find(quoted, pos + 1)) {
    std::size_t k = pos + quoted.size();
    while (k < text.size() && std::isspace(static_cast<unsigned char>(text[k]))) ++k;
    if (k < text.size() && text[k] == ':') return line_of_offset(text, pos);
  }
  return 0;
}

/// Start line of every element of the top-level "entries" array.
inline std::vector<std::size_t> entry_lines(const std::string& text) {
  std::vector<std::size_t> lines;
  std::size_t line = 1;
  int depth = 0, array_depth = -1;
  bool in_string = false, escaped = false, key_pending = false, expect = false;
  std::string token, last;
  for (char ch : text) {
    if (in_string) {
      if (escaped) {
        escaped = false;
        token += ch;
      } else if (ch == '\\') {
        escaped = true;
      } else if (ch == '"') {
        in_string = false;
        last = token;
      } else {
        token += ch;
      }
      if (ch == '\n') ++line;
      continue;
    }
    if (expect && !std::isspace(static_cast<unsigned char>(ch)) && ch != ']') {
      lines.push_back(line);
      expect = false;
    }
    switch (ch) {
      case '\n': ++line; break;
      case '"': in_string = true; token.clear(); break;
      case ':': key_pending = depth == 1 && last == "entries"; break;
      case '{':
      case '[':
        ++depth;
        if (ch == '[' && key_pending) {
          lines.clear();
          array_depth = depth;
          expect = true;
        }
        key_pending = false;
        break;
      case '}':
      case ']':
        if (depth == array_depth) {
          array_depth = -1;
          expect = false;
        }
        --depth;
        break;
      case ',':
        if (depth == array_depth) expect = true;
        key_pending = false;
        break;
      default: break;
    }
  }
  return lines;
}

class InstanceReader {
 public:
  explicit InstanceReader(const std::string& text) : text_(text) {}

  IlpInstance read() {
    json doc;
    try {
      doc = json::parse(text_);
    } catch (const json::parse_error& e) {
      throw instance_error(instance_error::Kind::MalformedJson, line_of_offset(text_, e.byte ? e.byte - 1 : 0),
                           std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) schema(1, "top level must be an object");
    for (const char* key : {"form", "rows", "cols", "entries", "b", "c"})
      if (!doc.contains(key)) schema(1, std::string("missing field \"") + key + "\"");

    IlpInstance p;
    const auto& form = doc["form"];
    if (form == "eq") p.form = Form::Eq;
    else if (form == "leq") p.form = Form::Leq;
    else schema(line_of_key(text_, "form"), "form must be \"eq\" or \"leq\"");

    const std::size_t rows = count(doc["rows"], "rows"), cols = count(doc["cols"], "cols");
    const auto& entries = doc["entries"];
    if (!entries.is_array()) schema(line_of_key(text_, "entries"), "entries must be an array");
    const auto lines = entry_lines(text_);
    auto line_at = [&](std::size_t k) { return k < lines.size() ? lines[k] : line_of_key(text_, "entries"); };

    std::vector<Entry> es;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> seen;
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const auto& e = entries[k];
      const std::size_t line = line_at(k);
      if (!e.is_array() || e.size() != 3) schema(line, "entry " + std::to_string(k) + " must be [row, col, value]");
      Entry entry{index(e[0], line, "row"), index(e[1], line, "col"), decimal(e[2], line, "value")};
      const std::string at = "(" + std::to_string(entry.row) + "," + std::to_string(entry.col) + ")";
      if (entry.row >= rows || entry.col >= cols)
        throw instance_error(instance_error::Kind::OutOfRange, line,
                             "entry " + at + " out of range for " + std::to_string(rows) + "x" + std::to_string(cols));
      if (entry.value == 0) throw instance_error(instance_error::Kind::ZeroEntry, line, "zero entry value at " + at);
      auto [it, fresh] = seen.emplace(std::make_pair(entry.row, entry.col), line);
      if (!fresh)
        throw instance_error(instance_error::Kind::Duplicate, line,
                             "duplicate entry " + at + " (first given on line " + std::to_string(it->second) + ")");
      es.push_back(std::move(entry));
    }
    p.A = SparseIntMatrix::from_entries(rows, cols, std::move(es));
    p.b = vector(doc["b"], "b", rows);
    p.c = vector(doc["c"], "c", cols);
    return p;
  }

 private:
  [[noreturn]] static void schema(std::size_t line, const std::string& what) {
    throw instance_error(instance_error::Kind::Schema, line, what);
  }

  static std::optional<std::size_t> as_count(const json& v) {
    if (v.is_number_unsigned()) return v.get<std::size_t>();
    if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::size_t>(v.get<long long>());
    if (v.is_string()) {
      try {
        Int x = parse_int(v.get<std::string>());
        if (x >= 0 && x.fits_ulong_p()) return x.get_ui();
      } catch (const argument_error&) {
      }
    }
    return std::nullopt;
  }

  std::size_t count(const json& v, const std::string& key) const {
    auto x = as_count(v);
    if (!x) schema(line_of_key(text_, key), key + " must be a nonnegative integer");
    return *x;
  }

  static std::size_t index(const json& v, std::size_t line, const std::string& what) {
    auto x = as_count(v);
    if (!x) schema(line, what + " index must be a nonnegative integer");
    return *x;
  }

  static Int decimal(const json& v, std::size_t line, const std::string& what) {
    if (!v.is_string()) schema(line, what + " must be a decimal string");
    try {
      return parse_int(v.get<std::string>());
    } catch (const argument_error&) {
      schema(line, what + " \"" + v.get<std::string>() + "\" is not a decimal integer");
    }
  }

  IntVec vector(const json& v, const std::string& key, std::size_t expected) const {
    const std::size_t line = line_of_key(text_, key);
    if (!v.is_array()) schema(line, key + " must be an array");
    if (v.size() != expected)
      schema(line, key + " has length " + std::to_string(v.size()) + ", expected " + std::to_string(expected));
    IntVec out;
    for (const auto& x : v) out.push_back(decimal(x, line, key + " entry"));
    return out;
  }

  const std::string& text_;
};

}  // namespace detail

inline IlpInstance parse_instance_text(const std::string& text) { return detail::InstanceReader(text).read(); }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw instance_error(instance_error::Kind::Io, 0, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline IlpInstance parse_instance(const std::string& path) {
  return parse_instance_text(read_file(path));
}

/// One entry per line so diagnostics point at the offending entry.
inline std::string write_instance(const IlpInstance& p) {
  auto strings = [](const IntVec& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", \"" : "\"") + to_string(v[i]) + "\"";
    return s + "]";
  };
  std::string out = "{\n";
  out += "  \"form\": \"" + std::string(p.form == Form::Eq ? "eq" : "leq") + "\",\n";
  out += "  \"rows\": " + std::to_string(p.rows()) + ",\n";
  out += "  \"cols\": " + std::to_string(p.cols()) + ",\n";
  out += "  \"entries\": [";
  const auto& es = p.A.entries();
  for (std::size_t k = 0; k < es.size(); ++k) {
    out += k ? ",\n    " : "\n    ";
    out += "[" + std::to_string(es[k].row) + ", " + std::to_string(es[k].col) + ", \"" + to_string(es[k].value) + "\"]";
  }
  out += es.empty() ? "],\n" : "\n  ],\n";
  out += "  \"b\": " + strings(p.b) + ",\n";
  out += "  \"c\": " + strings(p.c) + "\n}\n";
  return out;
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw instance_error(instance_error::Kind::Io, 0, "cannot write " + path);
  out << text;
}

template <class T>
json to_json(const std::vector<T>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

inline json to_json(const LpResult& r) {
  json j;
  j["status"] = to_string(r.status);
  if (r.optimal()) {
    j["objective"] = to_string(r.objective);
    j["x"] = to_json(r.x);
  }
  return j;
}

inline json to_json(const IlpStatus& r) {
  json j;
  j["status"] = to_string(r.status);
  if (r.optimal()) {
    j["objective"] = to_string(r.objective);
    j["x"] = to_json(r.x);
  }
  return j;
}

inline std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i].find_first_of(",\n\"") != std::string::npos)
      throw argument_error("csv_row: field \"" + fields[i] + "\" contains a separator");
    if (i) out += ',';
    out += fields[i];
  }
  return out + "\n";
}

}  // namespace sip
