/*
 * Copyright (C) 2026 renewal-sis contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef RENEWAL_SIS_ERROR_HPP
#define RENEWAL_SIS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace rsis
{

/// Base class of all errors raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: schema violations, out-of-range parameters.
class ConfigError : public Error
{
public:
    using Error::Error;
};

/// A domain object (kernel, history, params) would violate one of its invariants.
/// The message names the invariant.
class InvariantError : public ConfigError
{
public:
    InvariantError(const std::string& invariant, const std::string& detail)
        : ConfigError(invariant + ": " + detail)
        , m_invariant(invariant)
    {
    }

    const std::string& invariant() const noexcept
    {
        return m_invariant;
    }

private:
    std::string m_invariant;
};

/// Failure of a numerical scheme (non-convergence, range violation, NaN).
class NumericError : public Error
{
public:
    using Error::Error;
};

} // namespace rsis

#endif // RENEWAL_SIS_ERROR_HPP
