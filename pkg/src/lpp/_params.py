"""Embedded group parameters. Generated by scripts/gen_params.py; do not edit."""

TOY_P = 0xc7f69d8c4bee9aa8cd8ac953d1e0f43efc7e01046e30053c2716c390cf357c6a5a9777bc5beaed048c7519e33dd2c23fac00f849e69f49aa6c1d82d021dc9cab5cf2785d8d4936e68429d892385ab18a670af791702f13ba099754706ff7303d17da668158c6acedc6e129309bbe2658322a3ed39d7a6f170cefb810c9f93cb5
TOY_Q = 0xcd35e7ed6f5c76ae989002f7647eeb4f715b95bb
TOY_G = 0x38f6bf3cf8473b37feab0017a88e9f2a7ffb68deff7b26ef0a88406e3c11509087060175b2b1fa36cf6705142b629513e205dca11725ec214a7a1126a7c60d3bab06ab4311ba671e3624f44d9895bf5295a09b0072a7e707c56634c03d568dc4c9c081b35d86b4fe07a4d7ef4f181e67a6b83a55a6fa998277cb10fee59ec37d

SECURE_P = 0x87d4d43579d15560d271614d3bf508414a1432817b19a6211ecaaceec7ad911b3a919c4311a42bd07a66ae5b096e39ca6ecce0e704fe4e6499a0b720a07b3a0fb06f8e8298b26f7709633990c2c6478570001fb6f48e78e7992ae0dc922b9201c9b400271e29160622891bb7a61f4b8e5e088bf9aa26725ebd37de00275bf8bc5f6a8f9fd203bebd293282a9280ceb9be70f1d13bd9cf211c30237b6e55ff13d1ae01cb408bc240a35510b7dfb52ea8462c09db68d4503581dc5dce81c7a59005b206ec3af334b34bb815a9a3f04790e6408aeecf9b8677bc80bb5d25bce762b14dadc793cb6527e088e4573505c6d00e855ca9ae997361c70eb9bff3567f87f
SECURE_Q = 0xeeb1dfc0039c9797c27cace1567ae8ecaa997e30497f629a44cb2a39
SECURE_G = 0xbafd1a51584458a1c5ebdd295e0c3da38f17b6831cf4086242da4ba73922809ef43bbde95f0558df7cdc05af57d336755f71a93e2b975ee593bef4a30c19810baef7501e6ca1bea7750acb89f0ac8b8cad243d221223b0801cf7f512e7958a59bf50aba350115df29b16de17d42b58252fd25833bca40b66a67ce5937e4089169acd109585a24ee4494a5b3584550a8f96682d5429f28133bf50d7480cb2b20f13b4e7227660b7b7acb5b24c4584ec5ad807bf837290dc60d920431f1af073824f633105ae18f18cd43ae263f4811fea0de30dbf9279ee54ce0e3fc08838f7e6f7bc9f1421774c34fd4d9064541011c5d829b58cb9836012e68eace39cf4ca4
