// Copyright (c) 2026 The PrimForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "primforge/obj_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "primforge/errors.hpp"

namespace primforge {

namespace {

// "3", "3/5", "3//7", "3/5/7" -> vertex and optional normal index (1-based,
// negatives count from the end)
void parse_face_corner(const std::string& token, const std::string& name, int line, int& v,
                       int& vn) {
  v = 0;
  vn = 0;
  const std::size_t s1 = token.find('/');
  try {
    if (s1 == std::string::npos) {
      v = std::stoi(token);
      return;
    }
    v = std::stoi(token.substr(0, s1));
    const std::size_t s2 = token.find('/', s1 + 1);
    if (s2 == std::string::npos) return;  // v/vt
    const std::string last = token.substr(s2 + 1);
    if (!last.empty()) vn = std::stoi(last);
  } catch (const std::exception&) {
    throw ParseError(name, line, "bad face corner '" + token + "'");
  }
  if (v == 0) throw ParseError(name, line, "face corner has no vertex index");
}

int resolve_index(int idx, int count, const std::string& name, int line) {
  const int r = idx > 0 ? idx - 1 : count + idx;
  if (r < 0 || r >= count) throw ParseError(name, line, "index out of range");
  return r;
}

}  // namespace

TriangleMesh read_obj(std::istream& in, const std::string& name) {
  TriangleMesh mesh;
  std::vector<Eigen::Vector3d> file_normals;
  std::vector<Eigen::Vector3d> vertex_normals;  // sparse, keyed by vertex
  std::vector<bool> has_vertex_normal;
  bool any_normal_assigned = false;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;

    if (tag == "v") {
      Eigen::Vector3d p;
      if (!(ls >> p.x() >> p.y() >> p.z())) throw ParseError(name, line_no, "bad vertex");
      mesh.vertices.push_back(p);
    } else if (tag == "vn") {
      Eigen::Vector3d nv;
      if (!(ls >> nv.x() >> nv.y() >> nv.z())) throw ParseError(name, line_no, "bad normal");
      const double len = nv.norm();
      if (len < 1e-12) throw ParseError(name, line_no, "zero-length normal");
      file_normals.push_back(nv / len);
    } else if (tag == "f") {
      std::vector<int> vs, vns;
      std::string token;
      while (ls >> token) {
        int v = 0, vn = 0;
        parse_face_corner(token, name, line_no, v, vn);
        vs.push_back(resolve_index(v, int(mesh.vertices.size()), name, line_no));
        vns.push_back(vn == 0 ? -1 : resolve_index(vn, int(file_normals.size()), name, line_no));
      }
      if (vs.size() < 3) throw ParseError(name, line_no, "face needs at least 3 corners");
      for (std::size_t k = 1; k + 1 < vs.size(); ++k)
        mesh.faces.emplace_back(vs[0], vs[k], vs[k + 1]);

      vertex_normals.resize(mesh.vertices.size(), Eigen::Vector3d::Zero());
      has_vertex_normal.resize(mesh.vertices.size(), false);
      for (std::size_t k = 0; k < vs.size(); ++k) {
        if (vns[k] >= 0) {
          vertex_normals[std::size_t(vs[k])] = file_normals[std::size_t(vns[k])];
          has_vertex_normal[std::size_t(vs[k])] = true;
          any_normal_assigned = true;
        }
      }
    }
    // other records (o, g, s, vt, usemtl, ...) are ignored
  }

  if (any_normal_assigned) {
    vertex_normals.resize(mesh.vertices.size(), Eigen::Vector3d::Zero());
    has_vertex_normal.resize(mesh.vertices.size(), false);
    mesh.normals.resize(mesh.vertices.size());
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
      mesh.normals[i] = has_vertex_normal[i] ? vertex_normals[i] : Eigen::Vector3d::UnitZ();
  }
  return mesh;
}

TriangleMesh read_obj(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  return read_obj(in, path);
}

void write_obj(const TriangleMesh& mesh, std::ostream& out) {
  char buf[128];
  for (const auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof(buf), "v %.9g %.9g %.9g\n", v.x(), v.y(), v.z());
    out << buf;
  }
  const bool normals = mesh.has_normals();
  if (normals) {
    for (const auto& n : mesh.normals) {
      std::snprintf(buf, sizeof(buf), "vn %.9g %.9g %.9g\n", n.x(), n.y(), n.z());
      out << buf;
    }
  }
  for (const auto& f : mesh.faces) {
    if (normals) {
      std::snprintf(buf, sizeof(buf), "f %d//%d %d//%d %d//%d\n", f[0] + 1, f[0] + 1, f[1] + 1,
                    f[1] + 1, f[2] + 1, f[2] + 1);
    } else {
      std::snprintf(buf, sizeof(buf), "f %d %d %d\n", f[0] + 1, f[1] + 1, f[2] + 1);
    }
    out << buf;
  }
  if (!out) throw IoError("failed to write OBJ stream");
}

void write_obj(const TriangleMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  write_obj(mesh, out);
}

}  // namespace primforge
