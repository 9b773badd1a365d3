#pragma once

#include "ttc/dense_tensor.hpp"

#include <string>

namespace ttc {

// H x W x 3 tensor with values in [0, 1]. Grayscale inputs are promoted to
// three identical channels; maxval and the source kind are kept so a
// load/save round trip is byte-identical for 8-bit P6 data.
struct Image {
  DenseTensor tensor;
  int maxval = 255;
  bool from_grayscale = false;
};

// Reads P6/P5 (binary) and P3/P2 (ASCII) with maxval <= 255.
Image load_image(const std::string& path);

// Writes binary P6, clamping to [0, 1] and rounding.
void save_image(const DenseTensor& tensor, const std::string& path,
                int maxval = 255);

// Raw dense-tensor container (magic, dims, column-major doubles).
void save_dense(const DenseTensor& t, const std::string& path);
DenseTensor load_dense(const std::string& path);

}  // namespace ttc
