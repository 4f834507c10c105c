#include "saliqa/explanation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numeric>

#include "saliqa/errors.hpp"

namespace saliqa {

namespace {

void check_tensor(const FeatureTensor& t) {
    if (t.channels < 1 || t.height < 1 || t.width < 1)
        throw ParameterError("tensor dimensions must be >= 1");
    if (t.values.size() != static_cast<std::size_t>(t.channels) * t.height * t.width)
        throw ParameterError("tensor value count does not match dimensions");
    for (double v : t.values)
        if (!std::isfinite(v)) throw DataError("tensor contains non-finite values");
}

std::uint32_t read_u32_le(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void write_u32_le(std::ostream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

// Cyclic Jacobi eigensolver for a small symmetric matrix (row-major n x n).
// Returns eigenvalues in `diag`; eigenvectors as columns of `vecs`.
// Cost is O(n^3) per sweep; n here is min(K, H*W), small for feature maps.
void jacobi_eigen(std::vector<double>& mat, int n, std::vector<double>& diag,
                  std::vector<double>& vecs) {
    vecs.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) vecs[static_cast<std::size_t>(i) * n + i] = 1.0;
    auto a = [&](int r, int c) -> double& { return mat[static_cast<std::size_t>(r) * n + c]; };
    auto v = [&](int r, int c) -> double& { return vecs[static_cast<std::size_t>(r) * n + c]; };

    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (off < 1e-30) break;

        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double apq = a(p, q);
                if (apq == 0.0) continue;
                double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    diag.resize(n);
    for (int i = 0; i < n; ++i) diag[i] = a(i, i);
}

}  // namespace

FeatureTensor make_tensor(int channels, int height, int width, std::vector<double> values) {
    FeatureTensor t;
    t.channels = channels;
    t.height = height;
    t.width = width;
    t.values = std::move(values);
    check_tensor(t);
    return t;
}

FeatureTensor read_tensor(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open tensor file: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "FTNS", 4) != 0)
        throw FormatError("missing FTNS magic: " + path);
    std::uint32_t version = read_u32_le(in);
    if (version != 1) throw FormatError("unsupported FTNS version " + std::to_string(version));
    std::uint32_t k = read_u32_le(in);
    std::uint32_t h = read_u32_le(in);
    std::uint32_t w = read_u32_le(in);
    if (!in || k == 0 || h == 0 || w == 0) throw FormatError("bad FTNS dimensions: " + path);
    const std::size_t count = static_cast<std::size_t>(k) * h * w;
    std::vector<unsigned char> raw(count * 4);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size())
        throw FormatError("truncated FTNS payload: " + path);
    std::vector<double> vals(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::uint32_t bits = static_cast<std::uint32_t>(raw[4 * i]) |
                             (static_cast<std::uint32_t>(raw[4 * i + 1]) << 8) |
                             (static_cast<std::uint32_t>(raw[4 * i + 2]) << 16) |
                             (static_cast<std::uint32_t>(raw[4 * i + 3]) << 24);
        float f;
        std::memcpy(&f, &bits, 4);
        vals[i] = f;
    }
    return make_tensor(static_cast<int>(k), static_cast<int>(h), static_cast<int>(w), std::move(vals));
}

void write_tensor(const FeatureTensor& tensor, const std::string& path) {
    check_tensor(tensor);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write tensor file: " + path);
    out.write("FTNS", 4);
    write_u32_le(out, 1);
    write_u32_le(out, static_cast<std::uint32_t>(tensor.channels));
    write_u32_le(out, static_cast<std::uint32_t>(tensor.height));
    write_u32_le(out, static_cast<std::uint32_t>(tensor.width));
    for (double v : tensor.values) {
        float f = static_cast<float>(v);
        std::uint32_t bits;
        std::memcpy(&bits, &f, 4);
        unsigned char b[4] = {static_cast<unsigned char>(bits & 0xff),
                              static_cast<unsigned char>((bits >> 8) & 0xff),
                              static_cast<unsigned char>((bits >> 16) & 0xff),
                              static_cast<unsigned char>((bits >> 24) & 0xff)};
        out.write(reinterpret_cast<const char*>(b), 4);
    }
    if (!out) throw IoError("write failed: " + path);
}

SaliencyMap gradcam_combine(const FeatureTensor& features, const FeatureTensor& gradients,
                            GradcamMode mode, bool relu_output) {
    check_tensor(features);
    check_tensor(gradients);
    if (features.channels != gradients.channels || features.height != gradients.height ||
        features.width != gradients.width)
        throw ParameterError("feature and gradient tensors must share shape");

    const std::size_t plane = features.plane_size();
    std::vector<double> map(plane, 0.0);
    if (mode == GradcamMode::weighted) {
        for (int k = 0; k < features.channels; ++k) {
            const double* g = gradients.values.data() + static_cast<std::size_t>(k) * plane;
            const double* f = features.values.data() + static_cast<std::size_t>(k) * plane;
            double alpha = std::accumulate(g, g + plane, 0.0) / static_cast<double>(plane);
            for (std::size_t i = 0; i < plane; ++i) map[i] += alpha * f[i];
        }
    } else {
        for (int k = 0; k < features.channels; ++k) {
            const double* g = gradients.values.data() + static_cast<std::size_t>(k) * plane;
            const double* f = features.values.data() + static_cast<std::size_t>(k) * plane;
            for (std::size_t i = 0; i < plane; ++i) map[i] += g[i] * f[i];
        }
    }
    if (relu_output)
        for (double& v : map) v = std::max(v, 0.0);

    SaliencyMap out;
    out.width = features.width;
    out.height = features.height;
    out.values = std::move(map);
    out.norm_state = NormState::raw;
    return out;
}

SaliencyMap svd_first_component(const FeatureTensor& features) {
    check_tensor(features);
    const int k = features.channels;
    const int hw = static_cast<int>(features.plane_size());
    const double* A = features.values.data();  // k x hw, row-major

    double frob = 0.0;
    for (double v : features.values) frob += v * v;
    if (!(frob > 0.0)) throw DegenerateError("all-zero tensor has no principal component");

    // Eigen-decompose the smaller Gram matrix; its top eigenpair yields the
    // spatial singular vector either directly (hw <= k) or via back-projection.
    std::vector<double> spatial(hw);
    double sigma1 = 0.0;
    if (hw <= k) {
        std::vector<double> gram(static_cast<std::size_t>(hw) * hw, 0.0);
        for (int r = 0; r < k; ++r) {
            const double* row = A + static_cast<std::size_t>(r) * hw;
            for (int i = 0; i < hw; ++i)
                for (int j = i; j < hw; ++j)
                    gram[static_cast<std::size_t>(i) * hw + j] += row[i] * row[j];
        }
        for (int i = 0; i < hw; ++i)
            for (int j = 0; j < i; ++j)
                gram[static_cast<std::size_t>(i) * hw + j] = gram[static_cast<std::size_t>(j) * hw + i];
        std::vector<double> diag, vecs;
        jacobi_eigen(gram, hw, diag, vecs);
        int top = static_cast<int>(std::max_element(diag.begin(), diag.end()) - diag.begin());
        sigma1 = std::sqrt(std::max(diag[top], 0.0));
        for (int i = 0; i < hw; ++i) spatial[i] = vecs[static_cast<std::size_t>(i) * hw + top];
    } else {
        std::vector<double> gram(static_cast<std::size_t>(k) * k, 0.0);
        for (int r = 0; r < k; ++r) {
            const double* rr = A + static_cast<std::size_t>(r) * hw;
            for (int c = r; c < k; ++c) {
                const double* rc = A + static_cast<std::size_t>(c) * hw;
                double acc = 0.0;
                for (int i = 0; i < hw; ++i) acc += rr[i] * rc[i];
                gram[static_cast<std::size_t>(r) * k + c] = acc;
                gram[static_cast<std::size_t>(c) * k + r] = acc;
            }
        }
        std::vector<double> diag, vecs;
        jacobi_eigen(gram, k, diag, vecs);
        int top = static_cast<int>(std::max_element(diag.begin(), diag.end()) - diag.begin());
        sigma1 = std::sqrt(std::max(diag[top], 0.0));
        if (!(sigma1 > 0.0)) throw DegenerateError("tensor has no positive singular value");
        // v1 = A^T u1 / sigma1
        std::fill(spatial.begin(), spatial.end(), 0.0);
        for (int r = 0; r < k; ++r) {
            double u = vecs[static_cast<std::size_t>(r) * k + top];
            const double* row = A + static_cast<std::size_t>(r) * hw;
            for (int i = 0; i < hw; ++i) spatial[i] += u * row[i];
        }
        for (double& v : spatial) v /= sigma1;
    }

    double total = std::accumulate(spatial.begin(), spatial.end(), 0.0);
    double sign = total >= 0.0 ? 1.0 : -1.0;
    SaliencyMap out;
    out.width = features.width;
    out.height = features.height;
    out.norm_state = NormState::raw;
    out.values.resize(hw);
    for (int i = 0; i < hw; ++i) out.values[i] = std::max(sign * sigma1 * spatial[i], 0.0);
    return out;
}

SaliencyMap aggregate_maps(const std::vector<SaliencyMap>& maps) {
    if (maps.empty()) throw ParameterError("aggregate_maps needs at least one map");
    const SaliencyMap& first = maps.front();
    std::vector<double> acc(first.size(), 0.0);
    for (const auto& m : maps) {
        if (m.width != first.width || m.height != first.height)
            throw ParameterError("aggregate_maps: mismatched map dimensions");
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += m.values[i];
    }
    for (double& v : acc) v /= static_cast<double>(maps.size());
    return make_map(first.width, first.height, std::move(acc), NormState::raw);
}

}  // namespace saliqa
