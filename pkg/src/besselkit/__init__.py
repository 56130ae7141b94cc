"""besselkit: desk-scale verification of local computations on U(2,1) x U(1,1).

Subpackages:
    fieldarith  -- exact arithmetic in E = Q(sqrt(-D)), places, residue rings
    unitary     -- unitary matrix groups, Bruhat cells, regular representatives
    cosets      -- Iwahori/Cartan/Hecke double-coset atlases over residue rings
    spherical   -- Macdonald / Casselman-Shalika / Steinberg matrix coefficients
    lfunc       -- Gamma factors, Euler factors, conductors, Hecke and Sato-Tate
    arch        -- archimedean matrix coefficients, Whittaker and orbital integrals
    periods     -- nonarchimedean local period integrals (all place types)
    orbital     -- unipotent and regular local orbital integrals, the X-set
    cli         -- command line driver emitting JSON/CSV reports and figures
"""

__version__ = "0.1.0"
