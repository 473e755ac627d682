// Copyright 2026 The MolTop Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace moltop {

//! Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

//! Invalid graph construction or out-of-range node access.
class GraphError : public Error {
 public:
  using Error::Error;
};

//! SMILES syntax error; carries the byte offset of the offending character.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

//! Malformed or corrupt serialized payload (model files, graph6, split files).
class FormatError : public Error {
 public:
  using Error::Error;
};

//! Payload written by an incompatible (newer) format version.
class VersionError : public FormatError {
 public:
  using FormatError::FormatError;
};

//! Inconsistent data: bad labels, shape mismatches, missing columns.
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace moltop
