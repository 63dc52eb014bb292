#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <stdexcept>
#include <string>

namespace fvsolid {

// ---------------------------------------------------------------------------
// Small fixed-size algebra used throughout the library.
// ---------------------------------------------------------------------------

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
};

inline Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
inline Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
inline Vec3 operator*(Vec3 a, double s) { return a *= s; }
inline Vec3 operator*(double s, Vec3 a) { return a *= s; }
inline Vec3 operator/(Vec3 a, double s) { return a *= (1.0 / s); }
inline Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
inline bool operator==(const Vec3& a, const Vec3& b) { return a.x == b.x && a.y == b.y && a.z == b.z; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double mag(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 unit(const Vec3& a) { return a / mag(a); }

/// 3x3 second-order tensor. Displacement gradients follow the convention
/// m[i][j] = d(u_j)/d(x_i), so dot(d, grad) is the directional derivative
/// of u along d.
struct Tensor3 {
    double m[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};

    double& operator()(int i, int j) { return m[i][j]; }
    double operator()(int i, int j) const { return m[i][j]; }

    static Tensor3 identity() {
        Tensor3 t;
        t.m[0][0] = t.m[1][1] = t.m[2][2] = 1.0;
        return t;
    }

    double trace() const { return m[0][0] + m[1][1] + m[2][2]; }

    Tensor3 transposed() const {
        Tensor3 t;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) t.m[i][j] = m[j][i];
        return t;
    }

    Tensor3& operator+=(const Tensor3& o) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m[i][j] += o.m[i][j];
        return *this;
    }
    Tensor3& operator-=(const Tensor3& o) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m[i][j] -= o.m[i][j];
        return *this;
    }
    Tensor3& operator*=(double s) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m[i][j] *= s;
        return *this;
    }
};

inline Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
inline Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a -= b; }
inline Tensor3 operator*(Tensor3 a, double s) { return a *= s; }
inline Tensor3 operator*(double s, Tensor3 a) { return a *= s; }

/// (a . T)_j = sum_i a_i T_ij
inline Vec3 dot(const Vec3& a, const Tensor3& t) {
    Vec3 r;
    for (int j = 0; j < 3; ++j) r[j] = a.x * t.m[0][j] + a.y * t.m[1][j] + a.z * t.m[2][j];
    return r;
}

/// (T . a)_i = sum_j T_ij a_j
inline Vec3 dot(const Tensor3& t, const Vec3& a) {
    Vec3 r;
    for (int i = 0; i < 3; ++i) r[i] = t.m[i][0] * a.x + t.m[i][1] * a.y + t.m[i][2] * a.z;
    return r;
}

/// Outer product, (a b)_ij = a_i b_j.
inline Tensor3 outer(const Vec3& a, const Vec3& b) {
    Tensor3 t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t.m[i][j] = a[i] * b[j];
    return t;
}

inline double maxAbs(const Tensor3& t) {
    double r = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r = std::max(r, std::abs(t.m[i][j]));
    return r;
}

// ---------------------------------------------------------------------------
// Error types
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidArgumentError : Error {
    using Error::Error;
};

/// Fatal mesh defects: degenerate cells, inverted faces.
struct MeshError : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

struct DegenerateStencilError : Error {
    using Error::Error;
};

struct SingularSystemError : Error {
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Logging, controlled by FVSOLID_LOG={quiet|info|debug}
// ---------------------------------------------------------------------------

enum class LogLevel { quiet = 0, info = 1, debug = 2 };

inline LogLevel logLevel() {
    static const LogLevel level = [] {
        const char* env = std::getenv("FVSOLID_LOG");
        if (env == nullptr) return LogLevel::info;
        const std::string s(env);
        if (s == "quiet") return LogLevel::quiet;
        if (s == "debug") return LogLevel::debug;
        return LogLevel::info;
    }();
    return level;
}

inline bool logEnabled(LogLevel lvl) { return static_cast<int>(logLevel()) >= static_cast<int>(lvl); }

inline void logInfo(const std::string& msg) {
    if (logEnabled(LogLevel::info)) std::cout << msg << '\n';
}

inline void logDebug(const std::string& msg) {
    if (logEnabled(LogLevel::debug)) std::cout << msg << '\n';
}

/// Scientific notation with 6 significant digits; used wherever output
/// files must be byte-reproducible.
inline std::string formatSci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.5e", v);
    return buf;
}

}  // namespace fvsolid
