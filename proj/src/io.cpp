#include "toric/io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "toric/error.hpp"

namespace toric {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// Strips a trailing comment, honoring quoted strings.
std::string strip_comment(const std::string& line) {
  bool in_str = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (c == '"') in_str = !in_str;
    if (c == '#' && !in_str) return line.substr(0, i);
  }
  return line;
}

Json parse_scalar(const std::string& tok) {
  std::string t = trim(tok);
  if (t.empty()) throw Error(ErrorCode::IOError, "empty value in TOML input");
  if (t.front() == '"' && t.back() == '"' && t.size() >= 2)
    return Json(t.substr(1, t.size() - 2));
  if (t == "true") return Json(true);
  if (t == "false") return Json(false);
  if (t.find_first_of(".eE") != std::string::npos &&
      t.find_first_not_of("+-0123456789.eE") == std::string::npos)
    return Json(std::stod(t));
  if (t.find_first_not_of("+-0123456789") == std::string::npos)
    return Json(std::stoll(t));
  throw Error(ErrorCode::IOError, "cannot parse TOML value '" + t + "'");
}

Json parse_value(const std::string& tok) {
  std::string t = trim(tok);
  if (!t.empty() && t.front() == '[') {
    if (t.back() != ']') throw Error(ErrorCode::IOError, "unterminated array: " + t);
    Json arr = Json::array();
    std::string inner = t.substr(1, t.size() - 2);
    std::string cur;
    bool in_str = false;
    int depth = 0;
    for (char c : inner) {
      if (c == '"') in_str = !in_str;
      if (!in_str && c == '[') ++depth;
      if (!in_str && c == ']') --depth;
      if (c == ',' && !in_str && depth == 0) {
        if (!trim(cur).empty()) arr.push_back(parse_value(cur));
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!trim(cur).empty()) arr.push_back(parse_value(cur));
    return arr;
  }
  return parse_scalar(t);
}

}  // namespace

Json parse_toml_subset(const std::string& text) {
  Json root = Json::object();
  Json* target = &root;

  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;

    if (line.size() > 4 && line.substr(0, 2) == "[[" && line.substr(line.size() - 2) == "]]") {
      std::string key = trim(line.substr(2, line.size() - 4));
      if (!root.contains(key)) root[key] = Json::array();
      root[key].push_back(Json::object());
      target = &root[key].back();
      continue;
    }
    if (line.front() == '[' && line.back() == ']') {
      std::string key = trim(line.substr(1, line.size() - 2));
      root[key] = Json::object();
      target = &root[key];
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::IOError, "cannot parse TOML line '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    (*target)[key] = parse_value(line.substr(eq + 1));
  }
  return root;
}

Json load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IOError, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    try {
      return Json::parse(text);
    } catch (const std::exception& e) {
      throw Error(ErrorCode::IOError, std::string("JSON parse error: ") + e.what());
    }
  }
  return parse_toml_subset(text);
}

Rational rational_from_json(const Json& v, bool allow_float) {
  if (v.is_string()) return rational_from_string(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_number_float()) {
    if (!allow_float)
      throw Error(ErrorCode::InvalidInput,
                  "floating-point offset requires real_offsets=true; use a string like \"1/2\"");
    return rational_from_double(v.get<double>());
  }
  throw Error(ErrorCode::IOError, "expected a rational value");
}

Polytope polytope_from_json(const Json& doc) {
  if (!doc.contains("dimension"))
    throw Error(ErrorCode::IOError, "polytope spec missing 'dimension'");
  if (!doc.contains("facets") || !doc["facets"].is_array())
    throw Error(ErrorCode::IOError, "polytope spec missing 'facets' array");
  int dim = doc["dimension"].get<int>();
  bool raw = doc.value("raw_normals", false);
  bool real_offsets = doc.value("real_offsets", false);
  std::string name = doc.value("name", std::string());

  std::vector<Facet> facets;
  for (const auto& f : doc["facets"]) {
    if (!f.contains("normal") || !f.contains("offset"))
      throw Error(ErrorCode::IOError, "facet entry needs 'normal' and 'offset'");
    const auto& nj = f["normal"];
    Eigen::VectorXi normal(static_cast<int>(nj.size()));
    for (size_t i = 0; i < nj.size(); ++i) {
      if (!nj[i].is_number_integer())
        throw Error(ErrorCode::NonIntegralNormal, "facet normals must be integral");
      normal[static_cast<int>(i)] = nj[i].get<int>();
    }
    facets.push_back(Facet{normal, rational_from_json(f["offset"], real_offsets)});
  }
  return Polytope(dim, std::move(facets), raw, name);
}

Polytope load_polytope(const std::string& path) {
  return polytope_from_json(load_document(path));
}

Json polytope_to_json(const Polytope& P) {
  Json doc;
  if (!P.name().empty()) doc["name"] = P.name();
  doc["dimension"] = P.dimension();
  doc["facets"] = Json::array();
  for (int j = 0; j < P.facet_count(); ++j) {
    Json f;
    f["normal"] = Json::array();
    for (int i = 0; i < P.dimension(); ++i) f["normal"].push_back(P.facet(j).normal[i]);
    f["offset"] = rational_to_string(P.facet(j).offset);
    doc["facets"].push_back(f);
  }
  return doc;
}

}  // namespace toric
