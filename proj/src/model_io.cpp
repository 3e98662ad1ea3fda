// Copyright (c) 2026 The PrimForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "primforge/model_io.hpp"

#include <cstring>
#include <fstream>

#include <json.hpp>

#include "primforge/errors.hpp"

namespace primforge {

namespace {

constexpr char kMagic[4] = {'P', 'Q', 'P', 'F'};
constexpr std::size_t kRecordSize = 96;

template <typename T>
void append(std::vector<std::uint8_t>& out, T value) {
  const std::size_t at = out.size();
  out.resize(at + sizeof(T));
  std::memcpy(out.data() + at, &value, sizeof(T));
}

template <typename T>
T take(const std::vector<std::uint8_t>& in, std::size_t& at) {
  if (at + sizeof(T) > in.size()) throw TruncatedFile("model payload is short");
  T value;
  std::memcpy(&value, in.data() + at, sizeof(T));
  at += sizeof(T);
  return value;
}

void check_model(const PrimitiveModel& model) {
  if (model.primitives.empty()) throw InvalidModel("model has no primitives");
  if (model.version != 1) throw VersionUnsupported("model version " + std::to_string(model.version));
}

}  // namespace

std::vector<std::uint8_t> encode_model(const PrimitiveModel& model) {
  check_model(model);
  std::vector<std::uint8_t> out;
  out.reserve(48 + kRecordSize * model.primitives.size());

  out.insert(out.end(), kMagic, kMagic + 4);
  append<std::uint16_t>(out, 1);
  append<std::uint16_t>(out, model.normalization ? 1 : 0);
  append<std::uint32_t>(out, std::uint32_t(model.primitives.size()));
  if (model.normalization) {
    for (int k = 0; k < 3; ++k) append<double>(out, model.normalization->center[k]);
    append<double>(out, model.normalization->scale);
  }

  for (const PrimitiveRecord& rec : model.primitives) {
    append<std::uint8_t>(out, std::uint8_t(rec.shape_class.z));
    append<std::uint8_t>(out, std::uint8_t(rec.shape_class.xy));
    for (int k = 0; k < 6; ++k) append<std::uint8_t>(out, 0);
    append<double>(out, rec.params.eps1);
    append<double>(out, rec.params.eps2);
    for (int k = 0; k < 3; ++k) append<double>(out, rec.params.size[k]);
    for (int k = 0; k < 3; ++k) append<double>(out, rec.params.euler[k]);
    for (int k = 0; k < 3; ++k) append<double>(out, rec.params.translation[k]);
  }
  return out;
}

PrimitiveModel decode_model(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw BadMagic("not a pqp model");
  std::size_t at = 4;
  const auto version = take<std::uint16_t>(bytes, at);
  if (version != 1) throw VersionUnsupported("pqp version " + std::to_string(version));
  const auto reserved = take<std::uint16_t>(bytes, at);
  const auto count = take<std::uint32_t>(bytes, at);
  if (count == 0) throw InvalidModel("model has no primitives");

  PrimitiveModel model;
  model.version = 1;
  if (reserved & 1u) {
    Normalization norm;
    for (int k = 0; k < 3; ++k) norm.center[k] = take<double>(bytes, at);
    norm.scale = take<double>(bytes, at);
    model.normalization = norm;
  }

  model.primitives.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto z = take<std::uint8_t>(bytes, at);
    const auto xy = take<std::uint8_t>(bytes, at);
    if (z > 2 || xy > 2) throw InvalidClassTag("record " + std::to_string(i) + " has a bad class tag");
    for (int k = 0; k < 6; ++k) take<std::uint8_t>(bytes, at);
    PrimitiveRecord rec;
    rec.shape_class.z = ZClass(z);
    rec.shape_class.xy = XyClass(xy);
    rec.params.eps1 = take<double>(bytes, at);
    rec.params.eps2 = take<double>(bytes, at);
    for (int k = 0; k < 3; ++k) rec.params.size[k] = take<double>(bytes, at);
    for (int k = 0; k < 3; ++k) rec.params.euler[k] = take<double>(bytes, at);
    for (int k = 0; k < 3; ++k) rec.params.translation[k] = take<double>(bytes, at);
    model.primitives.push_back(rec);
  }
  return model;
}

std::string encode_model_json(const PrimitiveModel& model) {
  check_model(model);
  nlohmann::json j;
  j["format"] = "pqp";
  j["version"] = 1;
  if (model.normalization) {
    j["normalization"] = {
        {"center",
         {model.normalization->center.x(), model.normalization->center.y(),
          model.normalization->center.z()}},
        {"scale", model.normalization->scale}};
  }
  j["primitives"] = nlohmann::json::array();
  for (const PrimitiveRecord& rec : model.primitives) {
    const auto& p = rec.params;
    j["primitives"].push_back({
        {"z_class", json_name(rec.shape_class.z)},
        {"xy_class", json_name(rec.shape_class.xy)},
        {"eps", {p.eps1, p.eps2}},
        {"size", {p.size.x(), p.size.y(), p.size.z()}},
        {"rotation_euler_xyz", {p.euler.x(), p.euler.y(), p.euler.z()}},
        {"translation", {p.translation.x(), p.translation.y(), p.translation.z()}},
    });
  }
  return j.dump(2) + "\n";
}

PrimitiveModel decode_model_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("pqp json: ") + e.what());
  }
  try {
    if (j.value("format", "") != "pqp") throw BadMagic("json is not a pqp model");
    if (j.at("version").get<int>() != 1)
      throw VersionUnsupported("pqp json version " + j.at("version").dump());

    PrimitiveModel model;
    if (j.contains("normalization")) {
      Normalization norm;
      const auto c = j["normalization"].at("center").get<std::vector<double>>();
      if (c.size() != 3) throw ParseError("normalization center needs 3 numbers");
      norm.center = Eigen::Vector3d(c[0], c[1], c[2]);
      norm.scale = j["normalization"].at("scale").get<double>();
      model.normalization = norm;
    }
    for (const auto& e : j.at("primitives")) {
      PrimitiveRecord rec;
      rec.shape_class.z = z_class_from_json(e.at("z_class").get<std::string>());
      rec.shape_class.xy = xy_class_from_json(e.at("xy_class").get<std::string>());
      const auto eps = e.at("eps").get<std::vector<double>>();
      const auto size = e.at("size").get<std::vector<double>>();
      const auto rot = e.at("rotation_euler_xyz").get<std::vector<double>>();
      const auto tr = e.at("translation").get<std::vector<double>>();
      if (eps.size() != 2 || size.size() != 3 || rot.size() != 3 || tr.size() != 3)
        throw ParseError("primitive record arrays have wrong sizes");
      rec.params.eps1 = eps[0];
      rec.params.eps2 = eps[1];
      rec.params.size = Eigen::Vector3d(size[0], size[1], size[2]);
      rec.params.euler = Eigen::Vector3d(rot[0], rot[1], rot[2]);
      rec.params.translation = Eigen::Vector3d(tr[0], tr[1], tr[2]);
      model.primitives.push_back(rec);
    }
    if (model.primitives.empty()) throw InvalidModel("model has no primitives");
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("pqp json: ") + e.what());
  }
}

namespace {

bool json_path(const std::string& path) {
  return path.size() >= 5 && path.substr(path.size() - 5) == ".json";
}

}  // namespace

void save_model(const PrimitiveModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  if (json_path(path)) {
    const std::string text = encode_model_json(model);
    out.write(text.data(), std::streamsize(text.size()));
  } else {
    const std::vector<std::uint8_t> bytes = encode_model(model);
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
  }
  if (!out) throw IoError("failed to write model: " + path);
}

PrimitiveModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), kMagic, 4) == 0) return decode_model(bytes);
  if (!bytes.empty() && (bytes[0] == '{' || bytes[0] == ' ' || bytes[0] == '\n'))
    return decode_model_json(std::string(bytes.begin(), bytes.end()));
  if (json_path(path)) return decode_model_json(std::string(bytes.begin(), bytes.end()));
  throw BadMagic("unrecognized model file: " + path);
}

}  // namespace primforge
