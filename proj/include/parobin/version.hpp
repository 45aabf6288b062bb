// Copyright (c) the parobin contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PAROBIN_VERSION_HPP
#define PAROBIN_VERSION_HPP

#define PAROBIN_VERSION "0.1.0"

#endif
