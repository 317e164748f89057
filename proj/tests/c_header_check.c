/*
 * Copyright 2026 The mfchain Authors
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

/* Compiled as C to keep mfc.h a valid C header. */

#include "mfc/mfc.h"

int mfc_c_smoke(void) {
  mfc_config* config = NULL;
  mfc_estimate estimate;
  mfc_status status = mfc_config_create(&config);
  if (status != MFC_OK) return 1;
  status = mfc_config_set(config, "n_sites", "3");
  if (status == MFC_OK) status = mfc_config_validate(config);
  mfc_config_destroy(config);
  estimate.engine = MFC_ENGINE_EXACT;
  return status == MFC_OK && estimate.engine == MFC_ENGINE_EXACT ? 0 : 1;
}
