#include "image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "error.hpp"

namespace ffv {

namespace {

// next whitespace-separated token, skipping '#' comments
std::string pgm_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok.push_back((char)c);
    }
    return tok;
}

int pgm_int(std::istream& in) {
    std::string tok = pgm_token(in);
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
        fail(errc::malformed_image, "bad PGM header field");
    return std::stoi(tok);
}

} // namespace

GrayImage read_pgm(std::istream& in) {
    std::string magic = pgm_token(in);
    if (magic != "P5") fail(errc::malformed_image, "expected binary PGM (P5)");
    GrayImage img;
    img.width = pgm_int(in);
    img.height = pgm_int(in);
    int maxval = pgm_int(in);
    if (img.width <= 0 || img.height <= 0 || maxval <= 0 || maxval > 255)
        fail(errc::malformed_image, "unsupported PGM dimensions or depth");
    img.px.resize((std::size_t)img.width * img.height);
    in.read((char*)img.px.data(), (std::streamsize)img.px.size());
    if (in.gcount() != (std::streamsize)img.px.size())
        fail(errc::malformed_image, "truncated PGM pixel data");
    return img;
}

GrayImage read_pgm_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail(errc::io_error, "cannot open " + path);
    return read_pgm(f);
}

void write_pgm(const GrayImage& img, std::ostream& out) {
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    out.write((const char*)img.px.data(), (std::streamsize)img.px.size());
}

void write_pgm_file(const GrayImage& img, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(errc::io_error, "cannot open " + path);
    write_pgm(img, f);
    if (!f) fail(errc::io_error, "write failed: " + path);
}

GrayImage apply_rotation(const GrayImage& img, double deg) {
    GrayImage out;
    out.width = img.width;
    out.height = img.height;
    out.px.assign(img.px.size(), 255);
    const double cx = (img.width - 1) / 2.0, cy = (img.height - 1) / 2.0;
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            Vec2 src = rotate_offset({x - cx, y - cy}, -deg);
            int sx = (int)std::lround(cx + src.x);
            int sy = (int)std::lround(cy + src.y);
            if (img.in_bounds(sx, sy)) out.at(x, y) = img.at(sx, sy);
        }
    }
    return out;
}

GrayImage render_ellipse_mask(int width, int height, const Ellipse& e) {
    GrayImage img;
    img.width = width;
    img.height = height;
    img.px.assign((std::size_t)width * height, 255);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            if (e.contains(x, y)) img.at(x, y) = 0;
    return img;
}

namespace {

long long cross(const Minutia& o, const Minutia& a, const Minutia& b) {
    return (long long)(a.a - o.a) * (b.b - o.b) - (long long)(a.b - o.b) * (b.a - o.a);
}

std::vector<Minutia> convex_hull(std::vector<Minutia> pts) {
    std::sort(pts.begin(), pts.end(), [](const Minutia& p, const Minutia& q) {
        return p.a != q.a ? p.a < q.a : p.b < q.b;
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Minutia& p, const Minutia& q) {
                              return p.a == q.a && p.b == q.b;
                          }),
              pts.end());
    const int n = (int)pts.size();
    if (n < 3) return pts;
    std::vector<Minutia> h(2 * n);
    int k = 0;
    for (int i = 0; i < n; ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    for (int i = n - 2, lower = k + 1; i >= 0; --i) {
        while (k >= lower && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

} // namespace

GrayImage render_hull_mask(const std::vector<Minutia>& pts, int width, int height) {
    GrayImage img;
    img.width = width;
    img.height = height;
    img.px.assign((std::size_t)width * height, 255);

    std::vector<Minutia> hull = convex_hull(pts);
    if (hull.size() >= 3) {
        // scanline fill
        for (int y = 0; y < height; ++y) {
            std::vector<double> xs;
            for (std::size_t i = 0; i < hull.size(); ++i) {
                const Minutia& p = hull[i];
                const Minutia& q = hull[(i + 1) % hull.size()];
                if ((p.b <= y && q.b > y) || (q.b <= y && p.b > y)) {
                    double t = (double)(y - p.b) / (q.b - p.b);
                    xs.push_back(p.a + t * (q.a - p.a));
                }
            }
            std::sort(xs.begin(), xs.end());
            for (std::size_t i = 0; i + 1 < xs.size(); i += 2) {
                int x0 = std::max(0, (int)std::ceil(xs[i]));
                int x1 = std::min(width - 1, (int)std::floor(xs[i + 1]));
                for (int x = x0; x <= x1; ++x) img.at(x, y) = 0;
            }
        }
    }
    // stamp each point so sparse or degenerate inputs still have foreground
    for (const Minutia& p : pts)
        for (int dy = -2; dy <= 2; ++dy)
            for (int dx = -2; dx <= 2; ++dx)
                if (dx * dx + dy * dy <= 4 && img.in_bounds(p.a + dx, p.b + dy))
                    img.at(p.a + dx, p.b + dy) = 0;
    return img;
}

} // namespace ffv
