#pragma once

#include <complex>
#include <numbers>

namespace wgqed {

using Complex = std::complex<double>;

// Natural units: hbar = 1, frequencies and inverse lengths share one scale.
inline constexpr double kHbar = 1.0;
inline constexpr double kPi = std::numbers::pi;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

struct CVec3 {
    Complex x{};
    Complex y{};
    Complex z{};

    CVec3& operator+=(const CVec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    friend CVec3 operator*(Complex s, const CVec3& v) { return {s * v.x, s * v.y, s * v.z}; }
    friend CVec3 operator+(CVec3 a, const CVec3& b) { return a += b; }
};

/// Sum_i conj(a_i) * b_i.
inline Complex conj_dot(const CVec3& a, const CVec3& b) {
    return std::conj(a.x) * b.x + std::conj(a.y) * b.y + std::conj(a.z) * b.z;
}

inline double norm_sq(const CVec3& v) { return std::norm(v.x) + std::norm(v.y) + std::norm(v.z); }

}  // namespace wgqed
