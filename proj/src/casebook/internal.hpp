#pragma once

#include "invsep/casebook.hpp"
#include "invsep/error.hpp"
#include "invsep/json_io.hpp"

#include <functional>
#include <span>
#include <string>

namespace invsep::casebook::detail {

template <class T>
T param(const Json& params, const char* key, T fallback)
{
    if (!params.contains(key) || params.at(key).is_null())
        return fallback;
    try {
        return params.at(key).get<T>();
    } catch (const std::exception& e) {
        fail(ErrorCode::Parse, std::string("parameter '") + key + "': " + e.what());
    }
}

inline Complex complex_param(const Json& params, const char* key, Complex fallback)
{
    if (!params.contains(key) || params.at(key).is_null())
        return fallback;
    return io::complex_from_json(params.at(key));
}

inline Point point_param(const Json& params, const char* key)
{
    require(params.contains(key), ErrorCode::Parse, std::string("missing parameter '") + key + "'");
    return io::point_from_json(params.at(key));
}

inline double p_param(const Json& params, const char* key, double fallback)
{
    if (!params.contains(key))
        return fallback;
    const auto& v = params.at(key);
    if (v.is_string())
        return kInfinity;
    return v.get<double>();
}

inline Json p_json(double p)
{
    if (std::isinf(p))
        return "inf";
    return p;
}

/// Index of the first coordinate of largest modulus.
inline std::size_t argmax_modulus(std::span<const Complex> z)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < z.size(); ++i)
        if (std::abs(z[i]) > std::abs(z[best]))
            best = i;
    return best;
}

/// Separator exponent vectors satisfy (j+1) | e_j for every coordinate j (0-based).
inline bool roots_of_unity_divisibility(const Polynomial& p)
{
    for (const auto& [e, c] : p.terms())
        for (std::size_t j = 0; j < e.size(); ++j)
            if (e[j] % (j + 1) != 0)
                return false;
    return true;
}

/// Max coefficient change of P under each generator.
double generator_deviation(const Polynomial& p, const std::vector<GroupElement>& generators);

/// Result of the shared "largest coordinates return" exponent search used by the power-sum constructions.
struct PowerSearch {
    bool found = false;
    unsigned m = 0;
    double lower_bound = 0.0; ///< (1 − defect)·Σ_big |z|^m − Σ_rest |z|^m
    double defect = 0.0;
    std::size_t big_count = 0;
};

/// Scans return exponents (tolerance 1/2) of the arguments of `big` from m_min upward until
/// (1 − defect)·Σ|big|^m − rest(m) exceeds `target`.
PowerSearch power_search(std::span<const Complex> big, const std::function<double(unsigned)>& rest, double target,
                         unsigned m_min, unsigned m_max);

/// Stores the verdict in constants and checks it against params["expect"] (or `fallback` when
/// absent; an empty expectation adds no check).
void record_verdict(CaseReport& rep, const Json& params, Verdict verdict, const std::string& fallback = "");

} // namespace invsep::casebook::detail
