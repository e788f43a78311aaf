r"""Composite constants of the resolvent and enclosure estimates.

All literals were evaluated with 50 significant digits by
``scripts/compute_constants.py`` and are kept at that precision; Python rounds each one
to the nearest binary64 float. The test-suite recomputes each of them from its closed form.

=====================  ==========================================================
Name                   Closed form
=====================  ==========================================================
``C1``                 :math:`\sqrt{1 + e^{-1} + 2e^{-2}} / (2\pi)`
``C2``                 :math:`\sqrt{2} / (2\pi)`
``C2_TILDE``           :math:`\sqrt{2e^{-2}} / (2\pi) = c_2 e^{-1}`
``C_THM1``             :math:`(\pi/2)^{1/3} \sqrt{1 + e^{-1} + 2e^{-2}}`
``C_THM2``             :math:`2^{17/6} / (3\pi^{2/3})`
``LEMMA_COEFF``        :math:`(\pi/2)^{1/3} \sqrt{1 + e^{-1} + e^{-2}}`
``HLS_CONSTANT``       :math:`2^{2/3} \pi^{4/3}`
``RELATIVE_BOUND``     :math:`(2\pi^2)^{1/3}`
``GAUSS_L3``           :math:`(\pi/3)^{1/2}`
``GAUSS_L32``          :math:`2\pi/3`
=====================  ==========================================================

"""

C1 = 0.20372765290438564802038256515600934439686682105659
C2 = 0.22507907903927651738879979775168514566614353748880
C2_TILDE = 0.082801965816351942114494407293675077979978423912115
C_THM1 = 1.4880007239940718171343782375977779859568827102074
C_THM2 = 1.1075512150279114680010266634738008024425649370647
LEMMA_COEFF = 1.4252262180813443135778439642211663920844454269464
HLS_CONSTANT = 7.3038721193751091648340164010936719958592769717486
RELATIVE_BOUND = 2.7025676900634901886268730973102464770948192985507
GAUSS_L3 = 1.0233267079464884884795516248892648607073764377510
GAUSS_L32 = 2.0943951023931954923084289221863352561314462662501

KATO_CONSTANT = 0.63661977236758134307553505349005744813783858296183
r"""The constant :math:`2/\pi` of Kato's inequality for the massless Dirac operator."""
