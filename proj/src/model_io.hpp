#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "graph.hpp"

namespace snn {

// SPKF checkpoint container. Byte layout documented in docs/model_format.md.
// mode 0 = ANN graph, 1 = SNN graph, 2 = STDP classifier state.
inline constexpr uint32_t kModelFormatVersion = 1;
inline constexpr uint32_t kModeAnn = 0;
inline constexpr uint32_t kModeSnn = 1;
inline constexpr uint32_t kModeClassifier = 2;

class BinWriter {
public:
    explicit BinWriter(const std::string& path);
    void u8(uint8_t v);
    void u32(uint32_t v);
    void i32(int32_t v);
    void i64(int64_t v);
    void u64(uint64_t v);
    void f32(float v);
    void raw(const void* p, size_t n);
    void tensor(const Tensor& t);
    void close();

private:
    std::ofstream out_;
    std::string path_;
};

class BinReader {
public:
    explicit BinReader(const std::string& path);
    uint8_t u8();
    uint32_t u32();
    int32_t i32();
    int64_t i64();
    uint64_t u64();
    float f32();
    void raw(void* p, size_t n);
    Tensor tensor();

private:
    std::ifstream in_;
    std::string path_;
};

/// Writes the SPKF header and checks it on read; throws DataError on a bad
/// magic or an unsupported version, reporting both versions.
void write_header(BinWriter& w, uint32_t mode);
uint32_t read_header(BinReader& r);

void save_graph(const NetworkGraph& g, const std::string& path);
NetworkGraph load_graph(const std::string& path);

/// Peeks at the stored mode without loading the payload.
uint32_t peek_mode(const std::string& path);

}  // namespace snn
