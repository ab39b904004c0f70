// Copyright 2026 The omg-sim Authors
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

#include "omg/error.h"

namespace omg {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnknownSpecies:
            return "UnknownSpecies";
        case ErrorCode::UnknownPair:
            return "UnknownPair";
        case ErrorCode::NegativeDuration:
            return "NegativeDuration";
        case ErrorCode::InvalidRecord:
            return "InvalidRecord";
        case ErrorCode::InvalidMode:
            return "InvalidMode";
        case ErrorCode::IndexOutOfRange:
            return "IndexOutOfRange";
        case ErrorCode::MissingDuration:
            return "MissingDuration";
        case ErrorCode::InvalidConfig:
            return "InvalidConfig";
        case ErrorCode::InvalidCircuit:
            return "InvalidCircuit";
        case ErrorCode::UnsupportedInstruction:
            return "UnsupportedInstruction";
        case ErrorCode::CrystalTooLarge:
            return "CrystalTooLarge";
        case ErrorCode::InvalidShots:
            return "InvalidShots";
        case ErrorCode::ParseError:
            return "ParseError";
    }
    return "Error";
}

}  // namespace omg
