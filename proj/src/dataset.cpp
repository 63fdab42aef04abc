#include "dataset.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>

#include "error.hpp"

namespace fs = std::filesystem;

namespace snn {

std::vector<int64_t> LabeledDataset::image_shape() const {
    if (samples.empty()) return {};
    return samples.front().image.shape;
}

std::vector<int64_t> LabeledDataset::class_counts() const {
    std::vector<int64_t> counts(class_names.size(), 0);
    for (const auto& s : samples) counts[static_cast<size_t>(s.label)]++;
    return counts;
}

// ------------------------------------------------------------------- PPM ---

Tensor read_ppm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open image " + path);
    std::string magic;
    in >> magic;
    if (magic != "P6") throw DataError(path + ": not a binary PPM (P6) file");
    auto next_int = [&in, &path]() {
        // skip whitespace and '#' comments
        while (true) {
            int c = in.peek();
            if (c == '#') {
                std::string line;
                std::getline(in, line);
            } else if (std::isspace(c)) {
                in.get();
            } else {
                break;
            }
        }
        int64_t v;
        if (!(in >> v)) throw DataError(path + ": malformed PPM header");
        return v;
    };
    const int64_t w = next_int();
    const int64_t h = next_int();
    const int64_t maxval = next_int();
    if (maxval != 255) throw DataError(path + ": only 8-bit PPM supported");
    in.get();  // single whitespace after maxval
    std::vector<uint8_t> raw(static_cast<size_t>(w * h * 3));
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (in.gcount() != static_cast<std::streamsize>(raw.size()))
        throw DataError(path + ": truncated PPM payload");
    Tensor img({3, h, w});
    for (int64_t y = 0; y < h; ++y)
        for (int64_t x = 0; x < w; ++x)
            for (int64_t c = 0; c < 3; ++c)
                img[(c * h + y) * w + x] =
                    static_cast<float>(raw[static_cast<size_t>((y * w + x) * 3 + c)]) / 255.0f;
    return img;
}

void write_ppm(const Tensor& image, const std::string& path) {
    if (image.ndim() != 3 || image.dim(0) != 3)
        throw DataError("write_ppm expects a [3,H,W] tensor");
    const int64_t h = image.dim(1), w = image.dim(2);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << "P6\n" << w << " " << h << "\n255\n";
    std::vector<uint8_t> raw(static_cast<size_t>(w * h * 3));
    for (int64_t y = 0; y < h; ++y)
        for (int64_t x = 0; x < w; ++x)
            for (int64_t c = 0; c < 3; ++c) {
                float v = image[(c * h + y) * w + x];
                v = std::min(1.0f, std::max(0.0f, v));
                raw[static_cast<size_t>((y * w + x) * 3 + c)] =
                    static_cast<uint8_t>(std::lround(v * 255.0f));
            }
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size()));
}

Tensor resize_bilinear(const Tensor& image, int out_h, int out_w) {
    const int64_t c = image.dim(0), h = image.dim(1), w = image.dim(2);
    if (h == out_h && w == out_w) return image;
    Tensor out({c, out_h, out_w});
    const float sy = static_cast<float>(h) / static_cast<float>(out_h);
    const float sx = static_cast<float>(w) / static_cast<float>(out_w);
    for (int64_t ch = 0; ch < c; ++ch) {
        const float* src = image.ptr() + ch * h * w;
        float* dst = out.ptr() + ch * static_cast<int64_t>(out_h) * out_w;
        for (int64_t oy = 0; oy < out_h; ++oy) {
            float fy = (static_cast<float>(oy) + 0.5f) * sy - 0.5f;
            fy = std::min(std::max(fy, 0.0f), static_cast<float>(h - 1));
            const int64_t y0 = static_cast<int64_t>(fy);
            const int64_t y1 = std::min(y0 + 1, h - 1);
            const float wy = fy - static_cast<float>(y0);
            for (int64_t ox = 0; ox < out_w; ++ox) {
                float fx = (static_cast<float>(ox) + 0.5f) * sx - 0.5f;
                fx = std::min(std::max(fx, 0.0f), static_cast<float>(w - 1));
                const int64_t x0 = static_cast<int64_t>(fx);
                const int64_t x1 = std::min(x0 + 1, w - 1);
                const float wx = fx - static_cast<float>(x0);
                const float top = src[y0 * w + x0] * (1.0f - wx) + src[y0 * w + x1] * wx;
                const float bot = src[y1 * w + x0] * (1.0f - wx) + src[y1 * w + x1] * wx;
                dst[oy * out_w + ox] = top * (1.0f - wy) + bot * wy;
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------- loader ---

LabeledDataset load_image_folder(const std::string& path, int target_size, int* skipped) {
    if (!fs::is_directory(path)) throw DataError(path + " is not a directory");
    LabeledDataset ds;
    std::vector<std::string> class_dirs;
    for (const auto& e : fs::directory_iterator(path))
        if (e.is_directory()) class_dirs.push_back(e.path().filename().string());
    std::sort(class_dirs.begin(), class_dirs.end());
    if (class_dirs.empty()) throw DataError(path + " contains no class directories");
    ds.class_names = class_dirs;
    int skip_count = 0;
    for (size_t ci = 0; ci < class_dirs.size(); ++ci) {
        std::vector<std::string> files;
        for (const auto& e : fs::directory_iterator(fs::path(path) / class_dirs[ci]))
            if (e.is_regular_file()) files.push_back(e.path().string());
        std::sort(files.begin(), files.end());
        int loaded = 0;
        for (const auto& f : files) {
            try {
                Tensor img = read_ppm(f);
                img = resize_bilinear(img, target_size, target_size);
                ds.samples.push_back({std::move(img), static_cast<int>(ci)});
                ++loaded;
            } catch (const DataError& e) {
                std::cerr << "warning: skipping " << f << ": " << e.what() << "\n";
                ++skip_count;
            }
        }
        if (loaded == 0)
            throw DataError("class directory " + class_dirs[ci] + " has no readable images");
    }
    if (skipped) *skipped = skip_count;
    return ds;
}

// ------------------------------------------------------------- synthetic ---

namespace {

struct ClassStyle {
    float axis_ratio;      // minor/major
    float wall_frac;       // wall thickness as a fraction of the radius
    float speckle_density; // interior salt-pepper texture density
    float tint_r, tint_g, tint_b;
};

ClassStyle class_style(int c) {
    // Distinct morphology per class: rounder vs elongated, thin vs thick
    // wall, sparse vs dense interior speckle, mild tint shift.
    static const ClassStyle base[] = {
        {0.95f, 0.06f, 0.04f, 0.04f, 0.00f, -0.04f},
        {0.66f, 0.16f, 0.12f, -0.03f, 0.03f, 0.00f},
        {0.50f, 0.10f, 0.32f, 0.00f, -0.04f, 0.05f},
        {0.36f, 0.22f, 0.20f, 0.05f, 0.04f, -0.05f},
        {0.80f, 0.28f, 0.06f, -0.05f, -0.02f, 0.04f},
        {0.58f, 0.05f, 0.45f, 0.02f, -0.05f, -0.03f},
    };
    const int n = static_cast<int>(sizeof(base) / sizeof(base[0]));
    ClassStyle s = base[c % n];
    // cycle with shrunken radius for class counts beyond the table
    const int wrap = c / n;
    if (wrap > 0) s.axis_ratio = std::max(0.25f, s.axis_ratio - 0.07f * static_cast<float>(wrap));
    return s;
}

Tensor render_oocyst(int size, const ClassStyle& style, Rng& rng) {
    std::uniform_real_distribution<float> unit(0.0f, 1.0f);
    const float sz = static_cast<float>(size);
    const float cx = sz * (0.5f + 0.12f * (unit(rng) - 0.5f));
    const float cy = sz * (0.5f + 0.12f * (unit(rng) - 0.5f));
    const float major = sz * (0.30f + 0.05f * unit(rng));
    const float ratio = std::max(0.2f, style.axis_ratio + 0.04f * (unit(rng) - 0.5f));
    const float minor = major * ratio;
    const float angle = 3.14159265f * unit(rng);
    const float wall = std::max(0.03f, style.wall_frac + 0.02f * (unit(rng) - 0.5f));
    const float ca = std::cos(angle), sa = std::sin(angle);

    const float bg[3] = {0.86f, 0.85f, 0.82f};
    const float interior[3] = {0.64f + style.tint_r, 0.60f + style.tint_g,
                               0.47f + style.tint_b};
    const float wall_col[3] = {0.33f, 0.24f, 0.15f};
    const float speck_col[3] = {0.28f, 0.26f, 0.18f};

    Tensor img({3, size, size});
    std::uniform_real_distribution<float> noise(-0.02f, 0.02f);
    for (int64_t y = 0; y < size; ++y) {
        for (int64_t x = 0; x < size; ++x) {
            const float dx = static_cast<float>(x) - cx;
            const float dy = static_cast<float>(y) - cy;
            const float u = (dx * ca + dy * sa) / major;
            const float v = (-dx * sa + dy * ca) / minor;
            const float rho = std::sqrt(u * u + v * v);
            const float* col = bg;
            if (rho <= 1.0f) {
                if (rho >= 1.0f - wall) {
                    col = wall_col;
                } else {
                    col = unit(rng) < style.speckle_density ? speck_col : interior;
                }
            } else if (unit(rng) < 0.003f) {
                col = speck_col;  // stray debris outside the oocyst
            }
            const float n0 = noise(rng), n1 = noise(rng), n2 = noise(rng);
            img[(0 * size + y) * size + x] = std::clamp(col[0] + n0, 0.0f, 1.0f);
            img[(1 * size + y) * size + x] = std::clamp(col[1] + n1, 0.0f, 1.0f);
            img[(2 * size + y) * size + x] = std::clamp(col[2] + n2, 0.0f, 1.0f);
        }
    }
    return img;
}

}  // namespace

LabeledDataset synth_generate(int n_classes, int n_per_class, int image_size, uint64_t seed) {
    if (n_classes < 2) throw DataError("synth_generate: need at least 2 classes");
    if (n_per_class < 1) throw DataError("synth_generate: need at least 1 sample per class");
    LabeledDataset ds;
    for (int c = 0; c < n_classes; ++c) ds.class_names.push_back("synth_" + std::to_string(c));
    for (int c = 0; c < n_classes; ++c) {
        const ClassStyle style = class_style(c);
        for (int i = 0; i < n_per_class; ++i) {
            Rng rng = make_rng(derive_seed(seed, 0xda7a5e7ull,
                                           static_cast<uint64_t>(c) * 1000003ull +
                                               static_cast<uint64_t>(i)));
            ds.samples.push_back({render_oocyst(image_size, style, rng), c});
        }
    }
    return ds;
}

// ----------------------------------------------------------------- split ---

SplitResult stratified_split(const LabeledDataset& ds, uint64_t seed) {
    const int nc = ds.n_classes();
    std::vector<std::vector<int64_t>> by_class(static_cast<size_t>(nc));
    for (int64_t i = 0; i < ds.size(); ++i)
        by_class[static_cast<size_t>(ds.samples[static_cast<size_t>(i)].label)].push_back(i);

    SplitResult out;
    out.train.class_names = out.val.class_names = out.test.class_names = ds.class_names;
    out.train.split = "train";
    out.val.split = "val";
    out.test.split = "test";
    for (int c = 0; c < nc; ++c) {
        auto idx = by_class[static_cast<size_t>(c)];
        const int64_t n = static_cast<int64_t>(idx.size());
        const int64_t n_test = std::llround(0.20 * static_cast<double>(n));
        const int64_t rem = n - n_test;
        const int64_t n_val = std::llround(0.10 * static_cast<double>(rem));
        const int64_t n_train = rem - n_val;
        if (n_test < 1 || n_val < 1 || n_train < 1)
            throw DataError("class " + ds.class_names[static_cast<size_t>(c)] +
                            " has too few samples (" + std::to_string(n) +
                            ") to appear in every split");
        Rng rng = make_rng(derive_seed(seed, 0x5b117ull, static_cast<uint64_t>(c)));
        std::shuffle(idx.begin(), idx.end(), rng);
        for (int64_t i = 0; i < n; ++i) {
            const Sample& s = ds.samples[static_cast<size_t>(idx[static_cast<size_t>(i)])];
            if (i < n_test)
                out.test.samples.push_back(s);
            else if (i < n_test + n_val)
                out.val.samples.push_back(s);
            else
                out.train.samples.push_back(s);
        }
    }
    return out;
}

// ---------------------------------------------------------- augmentation ---

AugmentParams sample_augment_params(Rng& rng) {
    std::uniform_real_distribution<float> unit(0.0f, 1.0f);
    std::uniform_real_distribution<float> deg(-20.0f, 20.0f);
    std::uniform_real_distribution<float> fac(0.8f, 1.2f);
    AugmentParams p;
    p.flip = unit(rng) < 0.5f;
    p.angle_deg = deg(rng);
    p.brightness = fac(rng);
    p.contrast = fac(rng);
    p.saturation = fac(rng);
    return p;
}

static Tensor rotate_edge_fill(const Tensor& img, float angle_deg) {
    if (angle_deg == 0.0f) return img;
    const int64_t c = img.dim(0), h = img.dim(1), w = img.dim(2);
    const float rad = angle_deg * 3.14159265358979f / 180.0f;
    const float ca = std::cos(rad), sa = std::sin(rad);
    const float cy = static_cast<float>(h - 1) / 2.0f;
    const float cx = static_cast<float>(w - 1) / 2.0f;
    Tensor out({c, h, w});
    for (int64_t ch = 0; ch < c; ++ch) {
        const float* src = img.ptr() + ch * h * w;
        float* dst = out.ptr() + ch * h * w;
        for (int64_t y = 0; y < h; ++y)
            for (int64_t x = 0; x < w; ++x) {
                // inverse map, edge-replicated bilinear sample
                const float dx = static_cast<float>(x) - cx;
                const float dy = static_cast<float>(y) - cy;
                float fx = ca * dx + sa * dy + cx;
                float fy = -sa * dx + ca * dy + cy;
                fx = std::min(std::max(fx, 0.0f), static_cast<float>(w - 1));
                fy = std::min(std::max(fy, 0.0f), static_cast<float>(h - 1));
                const int64_t x0 = static_cast<int64_t>(fx);
                const int64_t y0 = static_cast<int64_t>(fy);
                const int64_t x1 = std::min(x0 + 1, w - 1);
                const int64_t y1 = std::min(y0 + 1, h - 1);
                const float wx = fx - static_cast<float>(x0);
                const float wy = fy - static_cast<float>(y0);
                const float top = src[y0 * w + x0] * (1.0f - wx) + src[y0 * w + x1] * wx;
                const float bot = src[y1 * w + x0] * (1.0f - wx) + src[y1 * w + x1] * wx;
                dst[y * w + x] = top * (1.0f - wy) + bot * wy;
            }
    }
    return out;
}

Tensor augment_with(const Tensor& image, const AugmentParams& p) {
    const int64_t c = image.dim(0), h = image.dim(1), w = image.dim(2);
    Tensor out = image;
    if (p.flip) {
        for (int64_t ch = 0; ch < c; ++ch)
            for (int64_t y = 0; y < h; ++y) {
                float* row = out.ptr() + (ch * h + y) * w;
                std::reverse(row, row + w);
            }
    }
    out = rotate_edge_fill(out, p.angle_deg);

    // brightness
    if (p.brightness != 1.0f)
        for (auto& v : out.data) v *= p.brightness;
    // contrast about the mean gray level
    if (p.contrast != 1.0f) {
        float mean = 0.0f;
        for (float v : out.data) mean += v;
        mean /= static_cast<float>(out.numel());
        for (auto& v : out.data) v = (v - mean) * p.contrast + mean;
    }
    // saturation: blend each pixel with its luma
    if (p.saturation != 1.0f && c == 3) {
        float* r = out.ptr();
        float* g = out.ptr() + h * w;
        float* b = out.ptr() + 2 * h * w;
        for (int64_t i = 0; i < h * w; ++i) {
            const float gray = 0.299f * r[i] + 0.587f * g[i] + 0.114f * b[i];
            r[i] = gray + (r[i] - gray) * p.saturation;
            g[i] = gray + (g[i] - gray) * p.saturation;
            b[i] = gray + (b[i] - gray) * p.saturation;
        }
    }
    for (auto& v : out.data) v = std::clamp(v, 0.0f, 1.0f);
    return out;
}

Tensor augment(const Tensor& image, Rng& rng) {
    return augment_with(image, sample_augment_params(rng));
}

// ------------------------------------------------------------- materialize ---

void materialize_dataset(const LabeledDataset& ds, const std::string& dir) {
    fs::create_directories(dir);
    std::vector<int> counters(ds.class_names.size(), 0);
    for (const auto& s : ds.samples) {
        const auto& cls = ds.class_names[static_cast<size_t>(s.label)];
        fs::create_directories(fs::path(dir) / cls);
        char name[32];
        std::snprintf(name, sizeof(name), "%05d.ppm", counters[static_cast<size_t>(s.label)]++);
        write_ppm(s.image, (fs::path(dir) / cls / name).string());
    }
}

void write_manifest(const SplitResult& splits, const std::string& csv_path,
                    const std::string& source) {
    std::ofstream out(csv_path);
    if (!out) throw DataError("cannot open " + csv_path + " for writing");
    out << "path,class,split\n";
    auto emit = [&](const LabeledDataset& ds) {
        std::vector<int> counters(ds.class_names.size(), 0);
        for (const auto& s : ds.samples) {
            const auto& cls = ds.class_names[static_cast<size_t>(s.label)];
            out << source << "/" << cls << "/" << counters[static_cast<size_t>(s.label)]++
                << "," << cls << "," << ds.split << "\n";
        }
    };
    emit(splits.train);
    emit(splits.val);
    emit(splits.test);
}

}  // namespace snn
