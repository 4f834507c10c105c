#pragma once

#include <string>
#include <vector>

#include "saliqa/saliency.hpp"

namespace saliqa {

// K x H x W activation (or gradient) tensor at feature-map resolution.
// Planar layout: values[(k*height + i)*width + j].
struct FeatureTensor {
    int channels = 0;  // K
    int height = 0;
    int width = 0;
    std::vector<double> values;

    double at(int k, int i, int j) const {
        return values[(static_cast<std::size_t>(k) * height + i) * width + j];
    }
    std::size_t plane_size() const { return static_cast<std::size_t>(height) * width; }
};

FeatureTensor make_tensor(int channels, int height, int width, std::vector<double> values);

// FTNS binary format: magic `FTNS`, u32 version=1, u32 K, u32 H, u32 W,
// then K*H*W float32 little-endian values row-major per channel.
FeatureTensor read_tensor(const std::string& path);
void write_tensor(const FeatureTensor& tensor, const std::string& path);

// weighted: channel weights are spatial means of the gradients.
// elementwise: per-cell gradient * activation product, summed over channels.
enum class GradcamMode { weighted, elementwise };

SaliencyMap gradcam_combine(const FeatureTensor& features, const FeatureTensor& gradients,
                            GradcamMode mode = GradcamMode::weighted, bool relu_output = true);

// Best rank-1 spatial component of the K x (H*W) channel matrix: sigma_1 * v_1
// reshaped to H x W, sign chosen for nonnegative sum, negatives clamped to 0.
SaliencyMap svd_first_component(const FeatureTensor& features);

// Element-wise mean of pre-aligned maps.
SaliencyMap aggregate_maps(const std::vector<SaliencyMap>& maps);

}  // namespace saliqa
