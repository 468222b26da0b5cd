#include "starprune/fst1.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <limits>

namespace starprune {

namespace {

constexpr char kMagic[4] = {'F', 'S', 'T', '1'};

void put_u32le(std::ostream& os, uint32_t v) {
    const char b[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                       static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
    os.write(b, 4);
}

uint32_t get_u32le(std::istream& is, const std::string& path) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4))
        throw IoError("FST1: truncated header: " + path);
    return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
           (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

}  // namespace

void fst1_save(const std::string& path, const Fst1Data& data) {
    if (data.dtype > 1)
        throw std::invalid_argument("FST1: unknown dtype code");
    if (data.dims.empty() || data.dims.size() > 255)
        throw std::invalid_argument("FST1: ndim must be in [1, 255]");
    const size_t count = data.element_count();
    if ((data.dtype == 0 && data.f32.size() != count) ||
        (data.dtype == 1 && data.u8.size() != count))
        throw std::invalid_argument("FST1: payload size does not match dims");

    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw IoError("FST1: cannot open for write: " + path);
    os.write(kMagic, 4);
    os.put(static_cast<char>(data.dtype));
    os.put(static_cast<char>(data.dims.size()));
    for (uint32_t d : data.dims) put_u32le(os, d);
    if (data.dtype == 0) {
        for (float v : data.f32) put_u32le(os, std::bit_cast<uint32_t>(v));
    } else {
        os.write(reinterpret_cast<const char*>(data.u8.data()),
                 static_cast<std::streamsize>(data.u8.size()));
    }
    if (!os)
        throw IoError("FST1: write failed: " + path);
}

Fst1Data fst1_load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw IoError("FST1: cannot open: " + path);
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
        throw IoError("FST1: bad magic: " + path);
    Fst1Data data;
    int dtype = is.get();
    int ndim = is.get();
    if (dtype == EOF || ndim == EOF)
        throw IoError("FST1: truncated header: " + path);
    if (dtype > 1)
        throw IoError("FST1: unknown dtype code: " + path);
    data.dtype = static_cast<uint8_t>(dtype);
    data.dims.resize(ndim);
    for (int i = 0; i < ndim; ++i) data.dims[i] = get_u32le(is, path);
    const size_t count = data.element_count();
    if (data.dtype == 0) {
        data.f32.resize(count);
        for (size_t i = 0; i < count; ++i)
            data.f32[i] = std::bit_cast<float>(get_u32le(is, path));
    } else {
        data.u8.resize(count);
        if (count > 0 &&
            !is.read(reinterpret_cast<char*>(data.u8.data()), static_cast<std::streamsize>(count)))
            throw IoError("FST1: truncated payload: " + path);
    }
    return data;
}

void fst1_save_tensor(const std::string& path, const Tensor& t) {
    Fst1Data d;
    d.dtype = 0;
    d.dims = {static_cast<uint32_t>(t.rows()), static_cast<uint32_t>(t.cols()),
              static_cast<uint32_t>(t.channels())};
    d.f32 = t.storage();
    fst1_save(path, d);
}

void fst1_save_field(const std::string& path, const Field& f) {
    Fst1Data d;
    d.dtype = 0;
    d.dims = {static_cast<uint32_t>(f.rows()), static_cast<uint32_t>(f.cols())};
    d.f32 = f.storage();
    fst1_save(path, d);
}

void fst1_save_mask(const std::string& path, const BinaryMask& m) {
    Fst1Data d;
    d.dtype = 1;
    d.dims = {static_cast<uint32_t>(m.rows()), static_cast<uint32_t>(m.cols())};
    d.u8 = m.storage();
    fst1_save(path, d);
}

Tensor fst1_load_tensor(const std::string& path) {
    Fst1Data d = fst1_load(path);
    if (d.dtype != 0 || d.dims.size() != 3)
        throw IoError("FST1: expected f32 tensor with 3 dims: " + path);
    Tensor t(static_cast<int>(d.dims[0]), static_cast<int>(d.dims[1]),
             static_cast<int>(d.dims[2]));
    t.storage() = std::move(d.f32);
    return t;
}

Field fst1_load_field(const std::string& path) {
    Fst1Data d = fst1_load(path);
    if (d.dtype != 0 || d.dims.size() != 2)
        throw IoError("FST1: expected f32 field with 2 dims: " + path);
    Field f(static_cast<int>(d.dims[0]), static_cast<int>(d.dims[1]));
    f.storage() = std::move(d.f32);
    return f;
}

BinaryMask fst1_load_mask(const std::string& path) {
    Fst1Data d = fst1_load(path);
    if (d.dtype != 1 || d.dims.size() != 2)
        throw IoError("FST1: expected u8 mask with 2 dims: " + path);
    BinaryMask m(static_cast<int>(d.dims[0]), static_cast<int>(d.dims[1]));
    m.storage() = std::move(d.u8);
    return m;
}

}  // namespace starprune
