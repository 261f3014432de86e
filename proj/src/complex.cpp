#include "yamabe/complex.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace yamabe {

namespace {

std::array<int, 4> sorted4(std::array<int, 4> f) {
  std::sort(f.begin(), f.end());
  return f;
}

FacetList finalize(std::vector<std::array<int, 4>> raw, int declared_n) {
  FacetList fl;
  int max_id = 0;
  std::set<std::array<int, 4>> seen;
  for (auto& f : raw) {
    auto s = sorted4(f);
    for (int a = 0; a < 3; ++a)
      if (s[a] == s[a + 1])
        throw ParseError("facet has repeated vertex id " + std::to_string(s[a]));
    for (int v : s) {
      if (v < 1) throw ParseError("vertex id out of range: " + std::to_string(v));
      max_id = std::max(max_id, v);
    }
    if (!seen.insert(s).second) {
      std::ostringstream os;
      os << "duplicate facet {" << s[0] << "," << s[1] << "," << s[2] << "," << s[3] << "}";
      throw ParseError(os.str());
    }
    fl.facets.push_back(s);
  }
  fl.n_vertices = declared_n > 0 ? declared_n : max_id;
  if (declared_n > 0 && max_id > declared_n)
    throw ParseError("vertex id " + std::to_string(max_id) + " exceeds declared count " +
                     std::to_string(declared_n));
  return fl;
}

FacetList parse_bracketed(const std::string& text) {
  std::vector<std::array<int, 4>> raw;
  std::array<int, 4> cur{};
  int depth = 0, nval = 0;
  std::string tok;
  auto flush_tok = [&]() {
    if (tok.empty()) return;
    if (nval >= 4) throw ParseError("facet with more than 4 vertices");
    try {
      cur[nval] = std::stoi(tok);
    } catch (const std::exception&) {
      throw ParseError("malformed token '" + tok + "'");
    }
    ++nval;
    tok.clear();
  };
  for (char ch : text) {
    if (ch == '[') {
      ++depth;
      if (depth > 2) throw ParseError("unexpected '['");
      nval = 0;
    } else if (ch == ']') {
      flush_tok();
      if (depth == 2) {
        if (nval != 4) throw ParseError("facet does not have 4 vertices");
        raw.push_back(cur);
      }
      --depth;
      if (depth < 0) throw ParseError("unbalanced ']'");
    } else if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
      flush_tok();
    } else if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '-' || ch == '+') {
      tok.push_back(ch);
    } else {
      throw ParseError(std::string("malformed token '") + ch + "'");
    }
  }
  if (depth != 0) throw ParseError("unbalanced '['");
  return finalize(std::move(raw), 0);
}

}  // namespace

FacetList parse_facet_list(const std::string& text) {
  // Decide format by the first non-space, non-comment character.
  size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    } else if (text[i] == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else {
      break;
    }
  }
  if (i < text.size() && text[i] == '[') return parse_bracketed(text);

  std::vector<std::array<int, 4>> raw;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    std::vector<int> vals;
    while (ls >> tok) {
      try {
        size_t pos = 0;
        int v = std::stoi(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        vals.push_back(v);
      } catch (const std::exception&) {
        throw ParseError("malformed token '" + tok + "'");
      }
    }
    if (vals.empty()) continue;
    if (vals.size() != 4)
      throw ParseError("expected 4 vertex ids per line, got " + std::to_string(vals.size()));
    raw.push_back({vals[0], vals[1], vals[2], vals[3]});
  }
  return finalize(std::move(raw), 0);
}

FacetList parse_facet_list(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_facet_list(buf.str());
}

FacetList read_facet_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open facet file: " + path);
  return parse_facet_list(in);
}

void write_facet_list(std::ostream& out, const FacetList& fl) {
  auto facets = fl.facets;
  std::sort(facets.begin(), facets.end());
  for (const auto& f : facets)
    out << f[0] << ' ' << f[1] << ' ' << f[2] << ' ' << f[3] << '\n';
}

Complex build_complex(const FacetList& fl) {
  Complex c;

  std::set<int> labels;
  for (const auto& f : fl.facets) labels.insert(f.begin(), f.end());
  for (int ext : labels) {
    c.internal_id[ext] = static_cast<int>(c.external_id.size());
    c.external_id.push_back(ext);
  }
  c.n_vertices = static_cast<int>(c.external_id.size());

  std::set<std::array<int, 2>> edge_set;
  std::set<std::array<int, 3>> tri_set;
  for (const auto& f : fl.facets) {
    std::array<int, 4> t;
    for (int a = 0; a < 4; ++a) t[a] = c.internal_id.at(f[a]);
    std::sort(t.begin(), t.end());
    c.tets.push_back(t);
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) edge_set.insert({t[a], t[b]});
    for (int a = 0; a < 4; ++a) {
      std::array<int, 3> tri;
      int p = 0;
      for (int b = 0; b < 4; ++b)
        if (b != a) tri[p++] = t[b];
      tri_set.insert(tri);
    }
  }

  c.edges.assign(edge_set.begin(), edge_set.end());
  c.triangles.assign(tri_set.begin(), tri_set.end());
  for (int e = 0; e < static_cast<int>(c.edges.size()); ++e) c.edge_index[c.edges[e]] = e;
  for (int tr = 0; tr < static_cast<int>(c.triangles.size()); ++tr)
    c.triangle_index[c.triangles[tr]] = tr;

  c.vertex_tets.resize(c.n_vertices);
  c.edge_tets.resize(c.edges.size());
  c.triangle_tets.resize(c.triangles.size());
  for (int ti = 0; ti < static_cast<int>(c.tets.size()); ++ti) {
    const auto& t = c.tets[ti];
    for (int a = 0; a < 4; ++a) c.vertex_tets[t[a]].push_back(ti);
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) c.edge_tets[c.edge_index.at({t[a], t[b]})].push_back(ti);
    for (int a = 0; a < 4; ++a) {
      std::array<int, 3> tri;
      int p = 0;
      for (int b = 0; b < 4; ++b)
        if (b != a) tri[p++] = t[b];
      c.triangle_tets[c.triangle_index.at(tri)].push_back(ti);
    }
  }

  c.degree.resize(c.n_vertices);
  for (int v = 0; v < c.n_vertices; ++v) {
    c.degree[v] = static_cast<int>(c.vertex_tets[v].size());
    c.d_max = std::max(c.d_max, c.degree[v]);
  }
  return c;
}

int Complex::vertex_degree(int internal_v) const {
  if (internal_v < 0 || internal_v >= n_vertices)
    throw std::out_of_range("unknown vertex id " + std::to_string(internal_v));
  return degree[internal_v];
}

ClosednessDiagnostics validate_closed(const Complex& c) {
  ClosednessDiagnostics d;
  for (int tr = 0; tr < static_cast<int>(c.triangles.size()); ++tr) {
    int count = static_cast<int>(c.triangle_tets[tr].size());
    if (count != 2) d.bad_triangles.emplace_back(c.triangles[tr], count);
  }
  return d;
}

}  // namespace yamabe
