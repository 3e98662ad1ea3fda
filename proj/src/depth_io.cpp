// Copyright (c) 2026 The PrimForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "primforge/depth_io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "primforge/errors.hpp"

namespace fs = std::filesystem;

namespace primforge {

void write_pfm(const std::vector<float>& data, int width, int height, const std::string& path) {
  if (width <= 0 || height <= 0 || data.size() != std::size_t(width) * height)
    throw IoError("pfm dimensions do not match the pixel buffer");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "Pf\n" << width << " " << height << "\n-1.0\n";
  // bottom row first
  for (int y = height - 1; y >= 0; --y) {
    out.write(reinterpret_cast<const char*>(data.data() + std::size_t(y) * width),
              std::streamsize(width * sizeof(float)));
  }
  if (!out) throw IoError("failed to write pfm: " + path);
}

std::vector<float> read_pfm(const std::string& path, int& width, int& height) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::string tag;
  in >> tag;
  if (tag != "Pf") throw BadMagic("not a grayscale pfm: " + path);
  double scale = 0.0;
  in >> width >> height >> scale;
  if (!in || width <= 0 || height <= 0) throw ParseError(path, 1, "bad pfm header");
  if (scale >= 0.0) throw ParseError(path, 1, "big-endian pfm is not supported");
  in.get();  // single whitespace after the header

  std::vector<float> data(std::size_t(width) * height);
  for (int y = height - 1; y >= 0; --y) {
    in.read(reinterpret_cast<char*>(data.data() + std::size_t(y) * width),
            std::streamsize(width * sizeof(float)));
  }
  if (!in) throw TruncatedFile("pfm payload is short: " + path);
  return data;
}

namespace {

std::string view_stem(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "view_%04d", index);
  return buf;
}

DepthView load_view_pair(const std::string& json_path, const std::string& pfm_path) {
  std::ifstream in(json_path);
  if (!in) throw IoError("cannot open: " + json_path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(json_path, 1, e.what());
  }

  DepthView view;
  try {
    view.width = j.at("width").get<int>();
    view.height = j.at("height").get<int>();
    view.fx = j.at("fx").get<double>();
    view.fy = j.at("fy").get<double>();
    view.cx = j.at("cx").get<double>();
    view.cy = j.at("cy").get<double>();
    const auto m = j.at("camera_to_world").get<std::vector<double>>();
    if (m.size() != 16) throw ParseError(json_path, 1, "camera_to_world needs 16 numbers");
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) view.camera_to_world(r, c) = m[std::size_t(r) * 4 + c];
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(json_path, 1, e.what());
  }

  int w = 0, h = 0;
  view.depth = read_pfm(pfm_path, w, h);
  if (w != view.width || h != view.height)
    throw IoError("pfm size disagrees with view metadata: " + pfm_path);
  return view;
}

}  // namespace

void write_view(const DepthView& view, const std::string& dir, int index) {
  const std::string stem = (fs::path(dir) / view_stem(index)).string();
  nlohmann::json j;
  j["width"] = view.width;
  j["height"] = view.height;
  j["fx"] = view.fx;
  j["fy"] = view.fy;
  j["cx"] = view.cx;
  j["cy"] = view.cy;
  std::vector<double> m(16);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m[std::size_t(r) * 4 + c] = view.camera_to_world(r, c);
  j["camera_to_world"] = m;

  std::ofstream out(stem + ".json");
  if (!out) throw IoError("cannot open for writing: " + stem + ".json");
  out << j.dump(2) << "\n";
  write_pfm(view.depth, view.width, view.height, stem + ".pfm");
}

std::vector<DepthView> load_depth_directory(const std::string& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);
  std::vector<std::string> jsons, pfms;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension().string();
    if (ext == ".json") jsons.push_back(entry.path().string());
    if (ext == ".pfm") pfms.push_back(entry.path().string());
  }
  std::sort(jsons.begin(), jsons.end());
  std::sort(pfms.begin(), pfms.end());
  if (jsons.empty() || pfms.empty()) throw IoError("no views found in " + dir);
  if (jsons.size() != pfms.size())
    throw IoError("mismatched json/pfm pair count in " + dir + " (" + std::to_string(jsons.size()) +
                  " vs " + std::to_string(pfms.size()) + ")");

  std::vector<DepthView> views;
  views.reserve(jsons.size());
  for (std::size_t i = 0; i < jsons.size(); ++i)
    views.push_back(load_view_pair(jsons[i], pfms[i]));
  return views;
}

}  // namespace primforge
