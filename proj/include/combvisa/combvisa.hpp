// Copyright 2026 The CombViSA Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Umbrella header.

#pragma once

#include "combvisa/dataset.hpp"
#include "combvisa/embeddings.hpp"
#include "combvisa/error.hpp"
#include "combvisa/eval.hpp"
#include "combvisa/expansion.hpp"
#include "combvisa/experiment.hpp"
#include "combvisa/lexicon.hpp"
#include "combvisa/nn/checkpoint.hpp"
#include "combvisa/nn/grad_check.hpp"
#include "combvisa/nn/model.hpp"
#include "combvisa/nn/train.hpp"
#include "combvisa/sentivec.hpp"
