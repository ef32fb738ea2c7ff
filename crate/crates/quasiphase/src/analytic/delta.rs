use num_complex::Complex64 as C64;

/// Complex-delta representation of the operator `|ket⟩⟨bra|`.
///
/// `P(α) = ⟨bra|ket⟩ δ(Re α − c_R) δ(Im α − c_I)` with the complex supports
/// `c_R = (ket + bra*)/2` and `c_I = (ket − bra*)/(2i)`. For `ket == bra` both
/// supports are real and the term is an ordinary point mass at `ket`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaTerm {
    ket: C64,
    bra: C64,
    log_prefactor: C64,
    support_re: C64,
    support_im: C64,
}

impl DeltaTerm {
    pub fn ket(&self) -> C64 {
        self.ket
    }

    pub fn bra(&self) -> C64 {
        self.bra
    }

    /// `⟨bra|ket⟩`.
    pub fn prefactor(&self) -> C64 {
        self.log_prefactor.exp()
    }

    /// `ln⟨bra|ket⟩ = −|bra − ket|²/2 + i Im(bra* ket)`.
    pub fn log_prefactor(&self) -> C64 {
        self.log_prefactor
    }

    pub fn support_re(&self) -> C64 {
        self.support_re
    }

    pub fn support_im(&self) -> C64 {
        self.support_im
    }

    /// `|ket − bra|²`.
    pub fn separation_sqr(&self) -> f64 {
        (self.ket - self.bra).norm_sqr()
    }

    pub fn is_diagonal(&self) -> bool {
        self.ket == self.bra
    }

    /// The term representing the adjoint operator `|bra⟩⟨ket|`.
    pub fn adjoint(&self) -> DeltaTerm {
        interference_term(self.bra, self.ket)
    }
}

/// Delta-term representation of `|ket⟩⟨bra|`.
pub fn interference_term(ket: C64, bra: C64) -> DeltaTerm {
    let i = C64::new(0.0, 1.0);
    DeltaTerm {
        ket,
        bra,
        log_prefactor: C64::new(-(bra - ket).norm_sqr() / 2.0, (bra.conj() * ket).im),
        support_re: (ket + bra.conj()) / 2.0,
        support_im: (ket - bra.conj()) / (2.0 * i),
    }
}

/// Normally ordered characteristic function of `|ket⟩⟨bra|`:
/// `⟨bra|ket⟩ exp(γ̃ bra* − γ̃* ket)`.
pub fn characteristic_fn(ket: C64, bra: C64, gamma: C64) -> C64 {
    let term = interference_term(ket, bra);
    (term.log_prefactor + gamma * bra.conj() - gamma.conj() * ket).exp()
}
