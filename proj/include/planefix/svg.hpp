#pragma once

// Minimal SVG 1.1 writer with a fixed palette; the first line after the XML prolog is a version comment.

#include <sstream>
#include <string>
#include <vector>

#include "planefix/geom.hpp"

namespace planefix::svg {

enum class Color { ink, boundary, ball, chord, gap, image, ray, accent };
const char* hex(Color c);

class Canvas {
 public:
  // viewBox is the bounds scaled by 1.2 about their center.
  explicit Canvas(Box bounds);

  void polyline(const std::vector<Point>& pts, Color c, bool closed = false, double width = 1.0);
  void polygon(const std::vector<Point>& pts, Color stroke, Color fill, double opacity = 0.25);
  void circle(Point center, double r, Color stroke, double width = 1.0);
  void dot(Point p, Color c, double r = 2.5);
  // Half-plane through q with outward normal n, clipped to the view.
  void half_plane(Point q, Point n, Color c);
  void text(Point p, const std::string& s, Color c = Color::ink);

  std::string str() const;
  void save(const std::string& path) const;

 private:
  Box view_;
  double unit_ = 1.0;  // stroke width in user units for one nominal pixel
  std::ostringstream body_;
};

}  // namespace planefix::svg
