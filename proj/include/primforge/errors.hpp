// Copyright (c) 2026 The PrimForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace primforge {

/// Base class for all primforge exceptions.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- file / codec failures ---

struct IoError : Error {
  using Error::Error;
};

struct BadMagic : IoError {
  using IoError::IoError;
};

struct VersionUnsupported : IoError {
  using IoError::IoError;
};

struct TruncatedFile : IoError {
  using IoError::IoError;
};

struct ParseError : IoError {
  using IoError::IoError;
  ParseError(const std::string& path, int line, const std::string& what)
      : IoError(path + ":" + std::to_string(line) + ": " + what), line_number(line) {}
  int line_number = 0;
};

struct InvalidClassTag : IoError {
  using IoError::IoError;
};

struct InvalidModel : Error {
  using Error::Error;
};

// --- geometric / degenerate-input failures ---

struct DegenerateMesh : Error {
  using Error::Error;
};

struct EmptyViews : Error {
  using Error::Error;
};

struct BadPose : Error {
  using Error::Error;
};

struct NoInterior : Error {
  using Error::Error;
};

struct EmptySet : Error {
  using Error::Error;
};

struct NonUnitNormal : Error {
  using Error::Error;
};

struct NonPositiveEpsilon : Error {
  using Error::Error;
};

}  // namespace primforge
