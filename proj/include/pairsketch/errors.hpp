// Copyright 2026 The pairsketch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PAIRSKETCH_ERRORS_HPP
#define PAIRSKETCH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pairsketch {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

#define PAIRSKETCH_DEFINE_ERROR(Name)         \
    class Name : public Error {               \
       public:                                \
        using Error::Error;                   \
    };

PAIRSKETCH_DEFINE_ERROR(EncodingError)
PAIRSKETCH_DEFINE_ERROR(InvalidInitError)
PAIRSKETCH_DEFINE_ERROR(SketchDestroyedError)
PAIRSKETCH_DEFINE_ERROR(InvalidQueryError)
PAIRSKETCH_DEFINE_ERROR(ScriptError)
PAIRSKETCH_DEFINE_ERROR(PermutationError)
PAIRSKETCH_DEFINE_ERROR(TooLargeError)
PAIRSKETCH_DEFINE_ERROR(InvalidParamsError)
PAIRSKETCH_DEFINE_ERROR(CapacityError)
PAIRSKETCH_DEFINE_ERROR(ParseError)
PAIRSKETCH_DEFINE_ERROR(ValidationError)
PAIRSKETCH_DEFINE_ERROR(ConfigError)

#undef PAIRSKETCH_DEFINE_ERROR

}  // namespace pairsketch

#endif
