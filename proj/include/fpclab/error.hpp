// Copyright 2026 The fpclab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace fpclab {

enum class ErrorKind {
  parameter,
  validation,
  io,
  format,
  corrupt,
  provenance,
  precondition,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define FPCLAB_DEFINE_ERROR(Name, Kind)                                     \
  class Name : public Error {                                               \
   public:                                                                  \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
  };

FPCLAB_DEFINE_ERROR(ParameterError, parameter)
FPCLAB_DEFINE_ERROR(ValidationError, validation)
FPCLAB_DEFINE_ERROR(IoError, io)
FPCLAB_DEFINE_ERROR(FormatError, format)
FPCLAB_DEFINE_ERROR(CorruptFileError, corrupt)
FPCLAB_DEFINE_ERROR(ProvenanceError, provenance)
FPCLAB_DEFINE_ERROR(PreconditionError, precondition)

#undef FPCLAB_DEFINE_ERROR

// Wraps an error raised inside one phase of a full run; the kind is kept so the
// CLI can still map it to an exit code.
class PhaseError : public Error {
 public:
  PhaseError(int phase, const Error& inner)
      : Error(inner.kind(), "phase " + std::to_string(phase) + ": " + inner.what()),
        phase_(phase) {}
  int phase() const noexcept { return phase_; }

 private:
  int phase_;
};

}  // namespace fpclab
