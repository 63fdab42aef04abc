#include "model_io.hpp"

#include <cstring>

#include "error.hpp"

// Multi-byte fields are little-endian; this implementation writes host byte
// order and is intended for little-endian targets (checked at compile time
// where the compiler exposes the macro).
#if defined(__BYTE_ORDER__) && (__BYTE_ORDER__ != __ORDER_LITTLE_ENDIAN__)
#error "SPKF serialization assumes a little-endian host"
#endif

namespace snn {

static constexpr char kMagic[4] = {'S', 'P', 'K', 'F'};

BinWriter::BinWriter(const std::string& path) : out_(path, std::ios::binary), path_(path) {
    if (!out_) throw DataError("cannot open " + path + " for writing");
}

void BinWriter::u8(uint8_t v) { raw(&v, 1); }
void BinWriter::u32(uint32_t v) { raw(&v, 4); }
void BinWriter::i32(int32_t v) { raw(&v, 4); }
void BinWriter::i64(int64_t v) { raw(&v, 8); }
void BinWriter::u64(uint64_t v) { raw(&v, 8); }
void BinWriter::f32(float v) { raw(&v, 4); }

void BinWriter::raw(const void* p, size_t n) {
    out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
    if (!out_) throw DataError("write failed for " + path_);
}

void BinWriter::tensor(const Tensor& t) {
    u32(static_cast<uint32_t>(t.shape.size()));
    for (int64_t d : t.shape) i64(d);
    if (!t.data.empty()) raw(t.data.data(), t.data.size() * sizeof(float));
}

void BinWriter::close() {
    out_.close();
    if (!out_) throw DataError("close failed for " + path_);
}

BinReader::BinReader(const std::string& path) : in_(path, std::ios::binary), path_(path) {
    if (!in_) throw DataError("cannot open checkpoint " + path);
}

void BinReader::raw(void* p, size_t n) {
    in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (in_.gcount() != static_cast<std::streamsize>(n))
        throw DataError("truncated checkpoint " + path_);
}

uint8_t BinReader::u8() {
    uint8_t v;
    raw(&v, 1);
    return v;
}
uint32_t BinReader::u32() {
    uint32_t v;
    raw(&v, 4);
    return v;
}
int32_t BinReader::i32() {
    int32_t v;
    raw(&v, 4);
    return v;
}
int64_t BinReader::i64() {
    int64_t v;
    raw(&v, 8);
    return v;
}
uint64_t BinReader::u64() {
    uint64_t v;
    raw(&v, 8);
    return v;
}
float BinReader::f32() {
    float v;
    raw(&v, 4);
    return v;
}

Tensor BinReader::tensor() {
    const uint32_t nd = u32();
    if (nd > 8) throw DataError("corrupt tensor header in " + path_);
    std::vector<int64_t> shape(nd);
    for (auto& d : shape) d = i64();
    Tensor t(shape);
    if (t.numel()) raw(t.data.data(), t.data.size() * sizeof(float));
    return t;
}

void write_header(BinWriter& w, uint32_t mode) {
    w.raw(kMagic, 4);
    w.u32(kModelFormatVersion);
    w.u32(mode);
}

uint32_t read_header(BinReader& r) {
    char magic[4];
    r.raw(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0)
        throw DataError("not an SPKF checkpoint (bad magic)");
    const uint32_t version = r.u32();
    if (version != kModelFormatVersion)
        throw DataError("checkpoint format version " + std::to_string(version) +
                        " does not match supported version " +
                        std::to_string(kModelFormatVersion));
    return r.u32();
}

static void write_layer(BinWriter& w, const Layer& l) {
    w.u32(static_cast<uint32_t>(l.kind));
    switch (l.kind) {
        case LayerKind::Conv2d:
            w.i64(l.in_ch);
            w.i64(l.out_ch);
            w.i64(l.kernel);
            w.i64(l.stride);
            w.i64(l.pad);
            w.tensor(l.weight);
            w.tensor(l.bias);
            break;
        case LayerKind::Linear:
            w.i64(l.in_features);
            w.i64(l.out_features);
            w.tensor(l.weight);
            w.tensor(l.bias);
            break;
        case LayerKind::AvgPool2d:
        case LayerKind::MaxPool2d:
            w.i64(l.pool);
            w.i64(l.pool_stride);
            break;
        case LayerKind::Flatten:
            break;
        case LayerKind::BatchNorm2d:
            w.i64(l.in_ch);
            w.f32(l.bn_eps);
            w.f32(l.bn_momentum);
            w.tensor(l.gamma);
            w.tensor(l.beta);
            w.tensor(l.running_mean);
            w.tensor(l.running_var);
            break;
        case LayerKind::ReLU:
            break;
        case LayerKind::QCFS:
            w.i64(l.levels);
            w.f32(l.lambda);
            w.f32(l.shift);
            break;
        case LayerKind::IF:
            w.i64(l.levels);
            w.f32(l.theta);
            w.f32(l.shift);
            break;
    }
}

static Layer read_layer(BinReader& r) {
    const uint32_t kind = r.u32();
    if (kind > static_cast<uint32_t>(LayerKind::IF))
        throw DataError("unknown layer kind tag " + std::to_string(kind));
    Layer l;
    l.kind = static_cast<LayerKind>(kind);
    switch (l.kind) {
        case LayerKind::Conv2d:
            l.in_ch = r.i64();
            l.out_ch = r.i64();
            l.kernel = r.i64();
            l.stride = r.i64();
            l.pad = r.i64();
            l.weight = r.tensor();
            l.bias = r.tensor();
            break;
        case LayerKind::Linear:
            l.in_features = r.i64();
            l.out_features = r.i64();
            l.weight = r.tensor();
            l.bias = r.tensor();
            break;
        case LayerKind::AvgPool2d:
        case LayerKind::MaxPool2d:
            l.pool = r.i64();
            l.pool_stride = r.i64();
            break;
        case LayerKind::Flatten:
            break;
        case LayerKind::BatchNorm2d:
            l.in_ch = l.out_ch = r.i64();
            l.bn_eps = r.f32();
            l.bn_momentum = r.f32();
            l.gamma = r.tensor();
            l.beta = r.tensor();
            l.running_mean = r.tensor();
            l.running_var = r.tensor();
            break;
        case LayerKind::ReLU:
            break;
        case LayerKind::QCFS:
            l.levels = static_cast<int>(r.i64());
            l.lambda = r.f32();
            l.shift = r.f32();
            break;
        case LayerKind::IF:
            l.levels = static_cast<int>(r.i64());
            l.theta = r.f32();
            l.shift = r.f32();
            break;
    }
    return l;
}

void save_graph(const NetworkGraph& g, const std::string& path) {
    BinWriter w(path);
    write_header(w, g.snn_mode ? kModeSnn : kModeAnn);
    w.i32(g.head_start);
    w.u32(static_cast<uint32_t>(g.input_shape.size()));
    for (int64_t d : g.input_shape) w.i64(d);
    w.u32(static_cast<uint32_t>(g.layers.size()));
    for (const auto& l : g.layers) write_layer(w, l);
    w.close();
}

NetworkGraph load_graph(const std::string& path) {
    BinReader r(path);
    const uint32_t mode = read_header(r);
    if (mode != kModeAnn && mode != kModeSnn)
        throw DataError(path + " is not a network checkpoint (mode " + std::to_string(mode) +
                        ")");
    NetworkGraph g;
    g.snn_mode = (mode == kModeSnn);
    g.head_start = r.i32();
    const uint32_t nd = r.u32();
    g.input_shape.resize(nd);
    for (auto& d : g.input_shape) d = r.i64();
    const uint32_t n = r.u32();
    g.layers.reserve(n);
    for (uint32_t i = 0; i < n; ++i) g.layers.push_back(read_layer(r));
    return g;
}

uint32_t peek_mode(const std::string& path) {
    BinReader r(path);
    return read_header(r);
}

}  // namespace snn
