/// Low-weight irreducible polynomials over GF(2), indexed by degree `m` (2..=127).
/// Each entry includes the leading `x^m` term.
pub(crate) const REDUCTION_POLYS: [(u32, u128); 126] = [
    (2, 0x7),                                  // x^2 + x + 1
    (3, 0xb),                                  // x^3 + x + 1
    (4, 0x13),                                 // x^4 + x + 1
    (5, 0x25),                                 // x^5 + x^2 + 1
    (6, 0x43),                                 // x^6 + x + 1
    (7, 0x83),                                 // x^7 + x + 1
    (8, 0x187),                                // x^8 + x^7 + x^2 + x + 1
    (9, 0x203),                                // x^9 + x + 1
    (10, 0x409),                               // x^10 + x^3 + 1
    (11, 0x805),                               // x^11 + x^2 + 1
    (12, 0x1009),                              // x^12 + x^3 + 1
    (13, 0x2027),                              // x^13 + x^5 + x^2 + x + 1
    (14, 0x4021),                              // x^14 + x^5 + 1
    (15, 0x8003),                              // x^15 + x + 1
    (16, 0x10047),                             // x^16 + x^6 + x^2 + x + 1
    (17, 0x20009),                             // x^17 + x^3 + 1
    (18, 0x40009),                             // x^18 + x^3 + 1
    (19, 0x80027),                             // x^19 + x^5 + x^2 + x + 1
    (20, 0x100009),                            // x^20 + x^3 + 1
    (21, 0x200005),                            // x^21 + x^2 + 1
    (22, 0x400003),                            // x^22 + x + 1
    (23, 0x800021),                            // x^23 + x^5 + 1
    (24, 0x1000087),                           // x^24 + x^7 + x^2 + x + 1
    (25, 0x2000009),                           // x^25 + x^3 + 1
    (26, 0x4000047),                           // x^26 + x^6 + x^2 + x + 1
    (27, 0x8000027),                           // x^27 + x^5 + x^2 + x + 1
    (28, 0x10000003),                          // x^28 + x + 1
    (29, 0x20000005),                          // x^29 + x^2 + 1
    (30, 0x40000003),                          // x^30 + x + 1
    (31, 0x80000009),                          // x^31 + x^3 + 1
    (32, 0x100400007),                         // x^32 + x^22 + x^2 + x + 1
    (33, 0x200000401),                         // x^33 + x^10 + 1
    (34, 0x400000081),                         // x^34 + x^7 + 1
    (35, 0x800000005),                         // x^35 + x^2 + 1
    (36, 0x1000000201),                        // x^36 + x^9 + 1
    (37, 0x2000000207),                        // x^37 + x^9 + x^2 + x + 1
    (38, 0x4000000087),                        // x^38 + x^7 + x^2 + x + 1
    (39, 0x8000000011),                        // x^39 + x^4 + 1
    (40, 0x10008000007),                       // x^40 + x^27 + x^2 + x + 1
    (41, 0x20000000009),                       // x^41 + x^3 + 1
    (42, 0x40000000081),                       // x^42 + x^7 + 1
    (43, 0x80000001007),                       // x^43 + x^12 + x^2 + x + 1
    (44, 0x100000000021),                      // x^44 + x^5 + 1
    (45, 0x200000020007),                      // x^45 + x^17 + x^2 + x + 1
    (46, 0x400000000003),                      // x^46 + x + 1
    (47, 0x800000000021),                      // x^47 + x^5 + 1
    (48, 0x1000000020007),                     // x^48 + x^17 + x^2 + x + 1
    (49, 0x2000000000201),                     // x^49 + x^9 + 1
    (50, 0x4000000000207),                     // x^50 + x^9 + x^2 + x + 1
    (51, 0x8000010000007),                     // x^51 + x^28 + x^2 + x + 1
    (52, 0x10000000000009),                    // x^52 + x^3 + 1
    (53, 0x20000000000047),                    // x^53 + x^6 + x^2 + x + 1
    (54, 0x40000000000201),                    // x^54 + x^9 + 1
    (55, 0x80000000000081),                    // x^55 + x^7 + 1
    (56, 0x100000000200007),                   // x^56 + x^21 + x^2 + x + 1
    (57, 0x200000000000011),                   // x^57 + x^4 + 1
    (58, 0x400000000080001),                   // x^58 + x^19 + 1
    (59, 0x800000001000007),                   // x^59 + x^24 + x^2 + x + 1
    (60, 0x1000000000000003),                  // x^60 + x + 1
    (61, 0x2000000000000027),                  // x^61 + x^5 + x^2 + x + 1
    (62, 0x4000000020000001),                  // x^62 + x^29 + 1
    (63, 0x8000000000000003),                  // x^63 + x + 1
    (64, 0x10000000000000807),                 // x^64 + x^11 + x^2 + x + 1
    (65, 0x20000000000040001),                 // x^65 + x^18 + 1
    (66, 0x40000000000000009),                 // x^66 + x^3 + 1
    (67, 0x80000000000000027),                 // x^67 + x^5 + x^2 + x + 1
    (68, 0x100000000000000201),                // x^68 + x^9 + 1
    (69, 0x200000000400000007),                // x^69 + x^34 + x^2 + x + 1
    (70, 0x400000000001000007),                // x^70 + x^24 + x^2 + x + 1
    (71, 0x800000000000000041),                // x^71 + x^6 + 1
    (72, 0x100100000000000000b),               // x^72 + x^60 + x^3 + x + 1
    (73, 0x2000000000002000001),               // x^73 + x^25 + 1
    (74, 0x4000000000800000001),               // x^74 + x^35 + 1
    (75, 0x800000000000000004b),               // x^75 + x^6 + x^3 + x + 1
    (76, 0x10000000000000200001),              // x^76 + x^21 + 1
    (77, 0x20000000000000000407),              // x^77 + x^10 + x^2 + x + 1
    (78, 0x40000000000000000087),              // x^78 + x^7 + x^2 + x + 1
    (79, 0x80000000000000000201),              // x^79 + x^9 + 1
    (80, 0x100000040000000000007),             // x^80 + x^54 + x^2 + x + 1
    (81, 0x200000000000000000011),             // x^81 + x^4 + 1
    (82, 0x400000000000000008007),             // x^82 + x^15 + x^2 + x + 1
    (83, 0x800000000200000000007),             // x^83 + x^45 + x^2 + x + 1
    (84, 0x1000000000000000000021),            // x^84 + x^5 + 1
    (85, 0x2000000000000000000107),            // x^85 + x^8 + x^2 + x + 1
    (86, 0x4000000000000000200001),            // x^86 + x^21 + 1
    (87, 0x8000000000000000002001),            // x^87 + x^13 + 1
    (88, 0x1000000000000000000020b),           // x^88 + x^9 + x^3 + x + 1
    (89, 0x20000000000004000000001),           // x^89 + x^38 + 1
    (90, 0x40000000000000008000001),           // x^90 + x^27 + 1
    (91, 0x80000000000000000200007),           // x^91 + x^21 + x^2 + x + 1
    (92, 0x100000000000000000200001),          // x^92 + x^21 + 1
    (93, 0x200000000000000000000005),          // x^93 + x^2 + 1
    (94, 0x400000000000000000200001),          // x^94 + x^21 + 1
    (95, 0x800000000000000000000801),          // x^95 + x^11 + 1
    (96, 0x1000000000000000000080007),         // x^96 + x^19 + x^2 + x + 1
    (97, 0x2000000000000000000000041),         // x^97 + x^6 + 1
    (98, 0x4000000000000000000000801),         // x^98 + x^11 + 1
    (99, 0x800000000000000000000004b),         // x^99 + x^6 + x^3 + x + 1
    (100, 0x10000000000000000000008001),       // x^100 + x^15 + 1
    (101, 0x20000000000000008000000007),       // x^101 + x^39 + x^2 + x + 1
    (102, 0x40000000000000000020000001),       // x^102 + x^29 + 1
    (103, 0x80000000000000000000000201),       // x^103 + x^9 + 1
    (104, 0x100000000000000000000000207),      // x^104 + x^9 + x^2 + x + 1
    (105, 0x200000000000000000000000011),      // x^105 + x^4 + 1
    (106, 0x400000000000000000000008001),      // x^106 + x^15 + 1
    (107, 0x800000000000400000000000007),      // x^107 + x^58 + x^2 + x + 1
    (108, 0x1000000000000000000000020001),     // x^108 + x^17 + 1
    (109, 0x2000000000000000000000000207),     // x^109 + x^9 + x^2 + x + 1
    (110, 0x4000000000000000000200000001),     // x^110 + x^33 + 1
    (111, 0x8000000000000000000000000401),     // x^111 + x^10 + 1
    (112, 0x10000000000008000000000000007),    // x^112 + x^63 + x^2 + x + 1
    (113, 0x20000000000000000000000000201),    // x^113 + x^9 + 1
    (114, 0x40000000000000000000000000807),    // x^114 + x^11 + x^2 + x + 1
    (115, 0x80000000000000000000100000007),    // x^115 + x^32 + x^2 + x + 1
    (116, 0x100000000000000000000000000017),   // x^116 + x^4 + x^2 + x + 1
    (117, 0x200000000000000000000000000027),   // x^117 + x^5 + x^2 + x + 1
    (118, 0x400000000000000000000200000001),   // x^118 + x^33 + 1
    (119, 0x800000000000000000000000000101),   // x^119 + x^8 + 1
    (120, 0x1000000000000000002000000000007),  // x^120 + x^49 + x^2 + x + 1
    (121, 0x2000000000000000000000000040001),  // x^121 + x^18 + 1
    (122, 0x4000000000000000000000000000047),  // x^122 + x^6 + x^2 + x + 1
    (123, 0x8000000000000000000000000000005),  // x^123 + x^2 + 1
    (124, 0x10000000000000000000000000080001), // x^124 + x^19 + 1
    (125, 0x20000000000001000000000000000007), // x^125 + x^72 + x^2 + x + 1
    (126, 0x40000000000000000000000000200001), // x^126 + x^21 + 1
    (127, 0x80000000000000000000000000000003), // x^127 + x + 1
];
