#include "planefix/svg.hpp"

#include <fstream>
#include <iomanip>

#include "planefix/error.hpp"

namespace planefix::svg {

namespace {

// SVG y grows downward; the figure is flipped so the plane reads as usual.
std::string xy(Point p) {
  std::ostringstream o;
  o << std::setprecision(9) << p.x << ',' << -p.y;
  return o.str();
}

std::string num(double v) {
  std::ostringstream o;
  o << std::setprecision(9) << v;
  return o.str();
}

}  // namespace

const char* hex(Color c) {
  switch (c) {
    case Color::ink: return "#222222";
    case Color::boundary: return "#1f4e79";
    case Color::ball: return "#9aa5b1";
    case Color::chord: return "#c0392b";
    case Color::gap: return "#f4d03f";
    case Color::image: return "#27ae60";
    case Color::ray: return "#8e44ad";
    case Color::accent: return "#e67e22";
  }
  return "#000000";
}

Canvas::Canvas(Box bounds) {
  Point c = bounds.center();
  Point h{std::max(bounds.width(), 1e-9) * 0.6, std::max(bounds.height(), 1e-9) * 0.6};
  view_ = {c - h, c + h};
  unit_ = std::max(view_.width(), view_.height()) / 600.0;
}

void Canvas::polyline(const std::vector<Point>& pts, Color c, bool closed, double width) {
  if (pts.empty()) return;
  body_ << (closed ? "<polygon" : "<polyline") << " fill=\"none\" stroke=\"" << hex(c) << "\" stroke-width=\""
        << num(width * unit_) << "\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) body_ << (i ? " " : "") << xy(pts[i]);
  body_ << "\"/>\n";
}

void Canvas::polygon(const std::vector<Point>& pts, Color stroke, Color fill, double opacity) {
  if (pts.empty()) return;
  body_ << "<polygon fill=\"" << hex(fill) << "\" fill-opacity=\"" << num(opacity) << "\" stroke=\"" << hex(stroke)
        << "\" stroke-width=\"" << num(unit_) << "\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) body_ << (i ? " " : "") << xy(pts[i]);
  body_ << "\"/>\n";
}

void Canvas::circle(Point center, double r, Color stroke, double width) {
  body_ << "<circle cx=\"" << num(center.x) << "\" cy=\"" << num(-center.y) << "\" r=\"" << num(r)
        << "\" fill=\"none\" stroke=\"" << hex(stroke) << "\" stroke-width=\"" << num(width * unit_) << "\"/>\n";
}

void Canvas::dot(Point p, Color c, double r) {
  body_ << "<circle cx=\"" << num(p.x) << "\" cy=\"" << num(-p.y) << "\" r=\"" << num(r * unit_) << "\" fill=\""
        << hex(c) << "\"/>\n";
}

void Canvas::half_plane(Point q, Point n, Color c) {
  Point t = perp(n) * (norm(view_.hi - view_.lo) * 2.0);
  polyline({q - t, q + t}, c);
}

void Canvas::text(Point p, const std::string& s, Color c) {
  body_ << "<text x=\"" << num(p.x) << "\" y=\"" << num(-p.y) << "\" font-size=\"" << num(12 * unit_)
        << "\" fill=\"" << hex(c) << "\">" << s << "</text>\n";
}

std::string Canvas::str() const {
  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o << "<!-- planefix 0.1.0 -->\n";
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" << num(view_.lo.x) << ' '
    << num(-view_.hi.y) << ' ' << num(view_.width()) << ' ' << num(view_.height()) << "\">\n";
  o << "<rect x=\"" << num(view_.lo.x) << "\" y=\"" << num(-view_.hi.y) << "\" width=\"" << num(view_.width())
    << "\" height=\"" << num(view_.height()) << "\" fill=\"#ffffff\"/>\n";
  o << body_.str() << "</svg>\n";
  return o.str();
}

void Canvas::save(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw Error(Errc::InvalidInput, "cannot write " + path);
  f << str();
}

}  // namespace planefix::svg
