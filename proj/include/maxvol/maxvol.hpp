// Copyright 2026 The maxvol Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef MAXVOL_MAXVOL_HPP
#define MAXVOL_MAXVOL_HPP

#include "maxvol/assess.hpp"
#include "maxvol/errors.hpp"
#include "maxvol/gen.hpp"
#include "maxvol/ge.hpp"
#include "maxvol/householder.hpp"
#include "maxvol/io.hpp"
#include "maxvol/lowrank.hpp"
#include "maxvol/matrix.hpp"
#include "maxvol/qr.hpp"
#include "maxvol/random.hpp"
#include "maxvol/search.hpp"
#include "maxvol/svd.hpp"
#include "maxvol/verify.hpp"
#include "maxvol/volume.hpp"

#endif  // MAXVOL_MAXVOL_HPP
