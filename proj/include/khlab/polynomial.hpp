#pragma once

#include <cstdint>
#include <cstdlib>
#include <map>
#include <string>

namespace khlab {

/// Integer Laurent polynomial in q. Zero coefficients are never stored.
class LaurentPolynomial {
public:
    LaurentPolynomial() = default;

    static LaurentPolynomial monomial(std::int64_t coefficient, int exponent) {
        LaurentPolynomial p;
        p.add_term(exponent, coefficient);
        return p;
    }

    void add_term(int exponent, std::int64_t coefficient) {
        if (coefficient == 0) return;
        auto& c = terms_[exponent];
        c += coefficient;
        if (c == 0) terms_.erase(exponent);
    }

    std::int64_t coefficient(int exponent) const {
        auto it = terms_.find(exponent);
        return it == terms_.end() ? 0 : it->second;
    }

    const std::map<int, std::int64_t>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    LaurentPolynomial& operator+=(const LaurentPolynomial& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }

    friend LaurentPolynomial operator+(LaurentPolynomial a, const LaurentPolynomial& b) { return a += b; }

    friend LaurentPolynomial operator*(const LaurentPolynomial& a, const LaurentPolynomial& b) {
        LaurentPolynomial out;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) out.add_term(ea + eb, ca * cb);
        return out;
    }

    LaurentPolynomial scaled(std::int64_t factor) const {
        LaurentPolynomial out;
        for (const auto& [e, c] : terms_) out.add_term(e, c * factor);
        return out;
    }

    /// q -> q^{-1}
    LaurentPolynomial mirrored() const {
        LaurentPolynomial out;
        for (const auto& [e, c] : terms_) out.terms_[-e] = c;
        return out;
    }

    /// e.g. "q^-1 + q" or "q + q^3 + q^5 - q^9", ascending exponents.
    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string s;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            const std::int64_t mag = std::llabs(c);
            if (first)
                s += c < 0 ? "-" : "";
            else
                s += c < 0 ? " - " : " + ";
            first = false;
            std::string mono = e == 0 ? "" : e == 1 ? "q" : "q^" + std::to_string(e);
            if (mono.empty())
                s += std::to_string(mag);
            else
                s += (mag == 1 ? "" : std::to_string(mag) + "*") + mono;
        }
        return s;
    }

    friend bool operator==(const LaurentPolynomial&, const LaurentPolynomial&) = default;

private:
    std::map<int, std::int64_t> terms_;
};

}  // namespace khlab
