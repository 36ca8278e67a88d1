/// Derive the owned/borrowed operator combinations from a `&T op &T` impl.
macro_rules! forward_ref_binops {
    ($t:ty, $($tr:ident :: $m:ident),+) => {
        $(
            impl std::ops::$tr<$t> for $t {
                type Output = $t;
                fn $m(self, o: $t) -> $t {
                    std::ops::$tr::$m(&self, &o)
                }
            }
            impl std::ops::$tr<&$t> for $t {
                type Output = $t;
                fn $m(self, o: &$t) -> $t {
                    std::ops::$tr::$m(&self, o)
                }
            }
            impl std::ops::$tr<$t> for &$t {
                type Output = $t;
                fn $m(self, o: $t) -> $t {
                    std::ops::$tr::$m(self, &o)
                }
            }
        )+
    };
}

macro_rules! forward_neg {
    ($t:ty) => {
        impl std::ops::Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}
