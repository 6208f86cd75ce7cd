// SPDX-License-Identifier: Apache-2.0
//
// nfvel: near-field velocity bounds for modular linear arrays
// Copyright (C) 2026 nfvel contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace nfvel
{
    // Input outside the mathematical domain of an operation (bad index, r <= 0, theta at an endpoint, ...)
    class DomainError : public std::domain_error
    {
    public:
        explicit DomainError(const std::string &what) : std::domain_error(what) {}
    };

    // The 2x2 velocity FIM is singular or the closed-form existence condition fails
    class SingularFimError : public std::runtime_error
    {
    public:
        explicit SingularFimError(const std::string &what) : std::runtime_error(what) {}
    };

    class InfeasibleDesignError : public std::runtime_error
    {
    public:
        explicit InfeasibleDesignError(const std::string &what) : std::runtime_error(what) {}
    };

    class ConfigError : public std::runtime_error
    {
    public:
        explicit ConfigError(const std::string &what) : std::runtime_error(what) {}
    };
}
