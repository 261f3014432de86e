#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace yamabe {

// Raised on malformed facet input (bad token, repeated vertex, id out of
// range, duplicate facet).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Facets as read from a triangulation list. Vertex ids are 1-based and are
// kept in the order given; facets are stored with sorted vertices.
struct FacetList {
  int n_vertices = 0;
  std::vector<std::array<int, 4>> facets;
};

// Parse either whitespace-delimited lines of 4 integers ('#' comments
// allowed) or a single bracketed list-of-lists [[a,b,c,d],...].
FacetList parse_facet_list(std::istream& in);
FacetList parse_facet_list(const std::string& text);
FacetList read_facet_file(const std::string& path);

// Canonical form: one facet per line, sorted lexicographically.
void write_facet_list(std::ostream& out, const FacetList& fl);

// The simplicial skeletons S0..S3 of a facet list, with incidence maps.
// Vertices are densely re-indexed 0..n-1 internally; external_id maps back
// to the 1-based input labels. Immutable once built.
struct Complex {
  int n_vertices = 0;
  std::vector<int> external_id;               // internal -> external label
  std::map<int, int> internal_id;             // external label -> internal

  std::vector<std::array<int, 2>> edges;      // sorted pairs, lexicographic
  std::vector<std::array<int, 3>> triangles;  // sorted triples
  std::vector<std::array<int, 4>> tets;       // sorted 4-sets

  std::map<std::array<int, 2>, int> edge_index;
  std::map<std::array<int, 3>, int> triangle_index;

  std::vector<std::vector<int>> vertex_tets;    // star of each vertex
  std::vector<std::vector<int>> edge_tets;      // tets containing each edge
  std::vector<std::vector<int>> triangle_tets;  // tets containing each triangle

  std::vector<int> degree;  // d_i = |vertex_tets[i]|
  int d_max = 0;

  int vertex_degree(int internal_v) const;
};

Complex build_complex(const FacetList& fl);

// Triangles whose tet incidence differs from 2. Empty <=> closed
// pseudomanifold. Non-closed complexes are still usable; callers warn.
struct ClosednessDiagnostics {
  std::vector<std::pair<std::array<int, 3>, int>> bad_triangles;  // (tri, count)
  bool closed() const { return bad_triangles.empty(); }
};

ClosednessDiagnostics validate_closed(const Complex& c);

}  // namespace yamabe
