# Regenerates golden::kBins in tests/golden.hpp (mu = 0.5 rows are printed but not frozen).
import numpy as np
LN2=np.log(2)
sf=3/(2*np.sqrt(2*LN2)); ss=10/(2*np.sqrt(2*LN2))
def src(l): return np.exp(-0.5*((l-826)/ss)**2)/(ss*np.sqrt(2*np.pi))
def f(l,c,p=1): return p*np.exp(-4*LN2*((l-c)/3)**2)
h=0.0005
for mu in (1.0,0.98,0.5):
  for dl in (1.4,2.4,4.9,6.5):
    c2=826-dl
    # arm2 product center and balance by exact integrals (gaussian product closed form)
    w=ss**2/(ss**2+sf**2)
    m1=826; m2=c2*w+826*(1-w)
    # amplitude of product gaussians: exp(-(c-826)^2/(2(ss^2+sf^2)))
    k2=np.exp(-(c2-826)**2/(2*(ss**2+sf**2)))
    lam_s=0.5*(m1+m2)
    l=np.arange(lam_s-60,lam_s+60+h/2,h)
    a1=src(l)*f(l,826)*k2   # arm1 attenuated to match arm2's integral
    a2=src(l)*f(l,c2)
    r=np.sqrt(a1*a2); M=a1+a2+2*mu*r; m=a1+a2-2*mu*r
    i=np.argmin(np.abs(l-lam_s))
    tr=lambda y: h*(y.sum()-0.5*(y[0]+y[-1]))
    lower=h*(m[:i].sum()-0.5*m[0]+0.5*m[i]); upper=h*(m[i+1:].sum()-0.5*m[-1]+0.5*m[i])
    den=tr(M)
    print(f"{{{mu}, {dl}, {lam_s:.12g}, {lower/den:.12g}, {upper/den:.12g}}},")
