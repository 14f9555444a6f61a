/*
 * lvseg : left-ventricle segmentation and volume estimation toolkit
 *
 * Copyright 2026 lvseg contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef LVSEG_LVSEG_HPP
#define LVSEG_LVSEG_HPP

#include "lvseg/core/error.hpp"
#include "lvseg/core/image.hpp"
#include "lvseg/core/meta.hpp"
#include "lvseg/core/stack.hpp"
#include "lvseg/eval/metrics.hpp"
#include "lvseg/eval/report.hpp"
#include "lvseg/imgproc/clahe.hpp"
#include "lvseg/imgproc/crop.hpp"
#include "lvseg/imgproc/normalize.hpp"
#include "lvseg/imgproc/orient.hpp"
#include "lvseg/imgproc/preprocess.hpp"
#include "lvseg/imgproc/resample.hpp"
#include "lvseg/ingest/contour.hpp"
#include "lvseg/ingest/dicom.hpp"
#include "lvseg/ingest/nifti.hpp"
#include "lvseg/ingest/study.hpp"
#include "lvseg/postproc/components.hpp"
#include "lvseg/postproc/filter.hpp"
#include "lvseg/roi/detect.hpp"
#include "lvseg/roi/harmonic.hpp"
#include "lvseg/roi/hough.hpp"
#include "lvseg/roi/kmeans.hpp"
#include "lvseg/unet/augment.hpp"
#include "lvseg/unet/loss.hpp"
#include "lvseg/unet/metrics.hpp"
#include "lvseg/unet/model.hpp"
#include "lvseg/unet/split.hpp"
#include "lvseg/unet/train.hpp"
#include "lvseg/unet/weights_io.hpp"
#include "lvseg/volume/ensemble.hpp"
#include "lvseg/volume/fallback.hpp"
#include "lvseg/volume/volume.hpp"

#endif
