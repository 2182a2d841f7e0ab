#pragma once

#include <boost/rational.hpp>

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace lozlab {

using Rng = std::mt19937_64;
using Rational = boost::rational<long long>;

// Stream for task `index` under `master`. Same pair -> same stream, any thread.
Rng make_stream(std::uint64_t master, std::uint64_t index);

constexpr double kPi = 3.14159265358979323846;

struct Point2 {
  double x = 0;
  double y = 0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }

double dist_point_segment(Point2 p, Point2 a, Point2 b);
// proper or touching intersection of closed segments
bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d);
double signed_area(const std::vector<Point2>& poly);

class UntileableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CapExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lozlab
