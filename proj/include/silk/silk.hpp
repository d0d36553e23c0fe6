// Copyright 2026 The Silkmesh Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Everything except the JSON helpers (silk/json_io.hpp).
#pragma once

#include "silk/config.hpp"
#include "silk/dataset.hpp"
#include "silk/error.hpp"
#include "silk/faces.hpp"
#include "silk/halfedge.hpp"
#include "silk/layering.hpp"
#include "silk/manifold.hpp"
#include "silk/mesh.hpp"
#include "silk/metrics.hpp"
#include "silk/obj_io.hpp"
#include "silk/pipeline.hpp"
#include "silk/preprocess.hpp"
#include "silk/repair.hpp"
#include "silk/token_stream.hpp"
#include "silk/topology_codec.hpp"
#include "silk/vocabulary.hpp"
#include "silk/watertight.hpp"
