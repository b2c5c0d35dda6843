#include "plhom/svg.hpp"

#include <sstream>

namespace plhom::svg {

namespace {

constexpr int kSize = 1000;
constexpr int kMargin = 40;

const char* kPalette[] = {"#1f6feb", "#d73a49", "#1a7f37", "#8250df",
                          "#bf5b16", "#0969da", "#cf222e", "#116329"};

// Fixed-point decimal with six places, exact rounding half up.
std::string dec6(const Rat& r) {
  mpz_class scaled_num = r.numerator() * 2000000 + r.denominator();
  mpz_class q = scaled_num / (r.denominator() * 2);  // floor((r*1e6) + 1/2)
  bool neg = q < 0;
  mpz_class a = abs(q);
  mpz_class whole = a / 1000000, frac = a % 1000000;
  std::ostringstream os;
  if (neg) os << "-";
  os << whole.get_str();
  std::string f = frac.get_str();
  f.insert(f.begin(), 6 - f.size(), '0');
  while (!f.empty() && f.back() == '0') f.pop_back();
  if (!f.empty()) os << "." << f;
  return os.str();
}

// Unit coordinates to viewport, y flipped.
std::string px(const Rat& x) { return dec6(Rat(kMargin) + Rat(kSize - 2 * kMargin) * x); }
std::string py(const Rat& y) { return dec6(Rat(kSize - kMargin) - Rat(kSize - 2 * kMargin) * y); }

void header(std::ostringstream& os) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
     << "\" viewBox=\"0 0 " << kSize << " " << kSize << "\">\n"
     << "<rect width=\"" << kSize << "\" height=\"" << kSize << "\" fill=\"white\"/>\n";
}

void frame_with_diagonal(std::ostringstream& os) {
  os << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kSize - 2 * kMargin
     << "\" height=\"" << kSize - 2 * kMargin << "\" fill=\"none\" stroke=\"#999999\"/>\n";
  os << "<line x1=\"" << kMargin << "\" y1=\"" << kSize - kMargin << "\" x2=\"" << kSize - kMargin
     << "\" y2=\"" << kMargin << "\" stroke=\"#cccccc\" stroke-dasharray=\"6,6\"/>\n";
}

void polyline(std::ostringstream& os, const PLMap& f, const char* color) {
  os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
  bool first = true;
  for (const Node& n : f.nodes()) {
    if (!first) os << " ";
    first = false;
    os << px(n.x) << "," << py(n.y);
  }
  os << "\"/>\n";
  for (const Node& n : f.nodes())
    os << "<circle cx=\"" << px(n.x) << "\" cy=\"" << py(n.y) << "\" r=\"3\" fill=\"" << color
       << "\"/>\n";
}

}  // namespace

std::string plot(const PLMap& f) {
  std::ostringstream os;
  header(os);
  frame_with_diagonal(os);
  polyline(os, f, kPalette[0]);
  os << "</svg>\n";
  return os.str();
}

std::string plot(const GroupSpec& G) {
  std::ostringstream os;
  header(os);
  frame_with_diagonal(os);
  std::size_t i = 0;
  for (auto& [name, m] : G.generators) {
    const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
    polyline(os, m, color);
    os << "<text x=\"" << kMargin + 8 << "\" y=\"" << kMargin + 22 * (i + 1)
       << "\" font-family=\"monospace\" font-size=\"16\" fill=\"" << color << "\">" << name
       << "</text>\n";
    ++i;
  }
  os << "</svg>\n";
  return os.str();
}

std::string plot(const Tower& T) {
  std::ostringstream os;
  header(os);
  // Baseline for the unit interval.
  os << "<line x1=\"" << kMargin << "\" y1=\"" << kSize - kMargin << "\" x2=\"" << kSize - kMargin
     << "\" y2=\"" << kSize - kMargin << "\" stroke=\"#333333\" stroke-width=\"2\"/>\n";
  std::size_t n = T.levels.size();
  int band = n == 0 ? 0 : (kSize - 3 * kMargin) / static_cast<int>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const SignedOrbital& lv = T.levels[i];
    const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
    // Smallest orbital drawn lowest.
    int y = kSize - 2 * kMargin - static_cast<int>(i) * band - band / 2;
    os << "<rect x=\"" << px(lv.orbital.left) << "\" y=\"" << y - 8 << "\" width=\""
       << dec6(Rat(kSize - 2 * kMargin) * lv.orbital.width()) << "\" height=\"16\" fill=\"" << color
       << "\" fill-opacity=\"0.55\"/>\n";
    os << "<text x=\"" << kMargin + 8 << "\" y=\"" << y - 14
       << "\" font-family=\"monospace\" font-size=\"14\" fill=\"#333333\">" << i + 1 << ": ("
       << lv.orbital.left << ", " << lv.orbital.right << ")</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace plhom::svg
