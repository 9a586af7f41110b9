// Generated by tools/gen_quadrature_tables.py. Do not edit by hand.
//
// Xiao-Gimbutas rules on the bi-unit reference tetrahedron.
// Each row is [r, s, t, weight].

pub(crate) const XG_DEGREE_2: [[f64; 4]; 4] = [
    [-0.7526663993430832, 0.6431450819352396, -0.9201339027170031, 0.13547673129997426],
    [-0.08507682582880904, -0.688133759001628, -0.2364692878613066, 0.37170343558209096],
    [-0.269370962370731, -0.6399406129792692, -0.9861535288527451, 0.40069458578263467],
    [-0.9992489699425414, -0.5678471416303044, -0.13859658584432777, 0.42545858066863346],
];

pub(crate) const XG_DEGREE_4: [[f64; 4]; 11] = [
    [-0.6506118826055388, -0.9190189865448192, -0.9728785962403942, 0.05233478789978661],
    [-0.8371901631942815, 0.50501701401931, -0.8638012581235867, 0.07369782554124919],
    [0.4824577641872452, -0.8655534102132332, -0.9296321404528025, 0.07385839849543516],
    [-0.8933175209285096, -0.16146737224097396, -0.9044371288818267, 0.07991091352874603],
    [-0.13409301903728876, -0.09846824781744645, -0.8810867674011323, 0.0926266212501805],
    [0.07601440783237146, -0.7411772524221791, -0.33961917032507105, 0.10155028699407781],
    [-0.9820174798133284, -0.7569160173321444, -0.38701202314061944, 0.10590224009070041],
    [-0.7867916548760128, -0.8055907108248335, 0.36878083090608005, 0.1419573788739868],
    [-0.34153408051470624, -0.9408610095870408, -0.3641928795732108, 0.14697897657133027],
    [-0.7923117671780135, -0.13457952190446276, -0.2923535215814058, 0.2066348213549948],
    [-0.39110319513100644, -0.5194466701438548, -0.7463965481692161, 0.257881082732846],
];

pub(crate) const XG_DEGREE_6: [[f64; 4]; 23] = [
    [-0.9513620515037142, -0.9223278313102311, 0.8058575980272227, 0.009461059802212705],
    [-0.9542683523719537, 0.8075400026643638, -0.9413285578336427, 0.009655035855822633],
    [-0.9824360844449622, -0.9188478978663642, -0.8227992990621795, 0.013897780964927933],
    [0.6822779033246369, -0.897349587669594, -0.925470495723289, 0.02123397224667167],
    [-0.5774046828368273, -0.9852909523238613, -0.49763100944494065, 0.030087556370857107],
    [-0.9530644088538909, -0.8704496791057899, -0.21827589865797636, 0.03230838250325913],
    [-0.5739176335276288, -0.8799788339594617, -0.9483146274785934, 0.03400576568938992],
    [-0.46431160363284885, -0.8704611261398942, 0.2735350171170279, 0.04201254651027525],
    [-0.892007718328171, -0.4484273990602988, -0.8799677016676626, 0.05295213019877637],
    [-0.34124056290160343, -0.34976068284594963, -0.3463329907619084, 0.05765239559396453],
    [0.24864272710685875, -0.86815015367998, -0.49281265051359935, 0.05812053074750557],
    [-0.873600038114861, 0.2349114402945376, -0.48310170203214875, 0.062150845502107616],
    [-0.50310091976221, 0.2530804034177647, -0.8757689336328025, 0.06286404062968162],
    [-0.8725342094100047, -0.44419266133984403, 0.18981937804359106, 0.06518676786992289],
    [-0.8696440144732591, 0.18943460375159127, -0.8667934039847938, 0.06635817345535243],
    [-0.8326423718798899, -0.8678026751706389, 0.26010911022197925, 0.07071109854422584],
    [0.1546915627794534, -0.4245498103470716, -0.8707587238532629, 0.07191334750441598],
    [-0.92342265852351, -0.34322365753755657, -0.35942513260461495, 0.07976179688190556],
    [-0.29612160533059095, -0.8898019550185486, -0.23783138218737965, 0.08348596704174836],
    [0.06012655096203323, -0.8664208004365237, -0.8460145657980656, 0.08408848251402738],
    [-0.6957923773801382, -0.7507000727250274, -0.597530865271158, 0.0857786959641167],
    [-0.39166146930043644, -0.36161143930213757, -0.9112333112855836, 0.08951442161674271],
    [-0.48835843147002755, -0.4411598941080236, -0.46086014073345605, 0.150132539325424],
];

pub(crate) const XG_DEGREE_8: [[f64; 4]; 44] = [
    [-0.99805624326197, 0.9147632521166054, -0.9679840315374035, 0.0020185938601534185],
    [-0.9647856877462431, -0.9822888114425885, 0.8971278595980097, 0.002326911380407536],
    [0.8816164056632043, -0.9398955044481356, -0.9865606423556936, 0.002772112756025173],
    [-0.9908576312509686, -0.902621990721956, -0.9556758578066752, 0.0033958673591239666],
    [-0.07637654966347462, -0.069369679173927, -0.9891556333856438, 0.009196571088500879],
    [-0.9284748582425599, 0.0006593440659523608, -0.9837758984885879, 0.010028200469147755],
    [-0.5385130064107012, 0.22267306738376824, -0.9888484539391236, 0.013168689059848962],
    [-0.9483863022549354, -0.9444464840128692, -0.06691882821816175, 0.013505228334331494],
    [-0.17215743312235976, -0.003490076435591405, -0.8404842580661885, 0.01582056092943096],
    [-0.600186541934157, -0.04118669329426816, -0.3598087864992038, 0.017065844496826132],
    [-0.6712261380303838, -0.920286644153154, -0.931035849042115, 0.018314363411047294],
    [-0.9264387005305036, 0.44102233143574354, -0.5912621521853492, 0.01962654290056972],
    [-0.6218510622599336, -0.9275906561429632, 0.46273472007217875, 0.02008502598013744],
    [-0.6987245764371495, 0.5247357699089057, -0.8951232201425935, 0.02051792721654788],
    [-0.5007258338842494, -0.6089078361547958, 0.08358636492361904, 0.020821852271707495],
    [-0.48416665369138157, -0.5580450700023646, -0.9752081532796091, 0.02203915573406971],
    [-0.8990899861365507, -0.9212395626309887, -0.6536087826332978, 0.022633639010686307],
    [0.49714912149152557, -0.9091309392957808, -0.6734013134012917, 0.023185603416681962],
    [-0.9070277411778145, -0.6870266299198674, 0.5029930723036753, 0.02348338158017796],
    [0.44741899008349795, -0.9075988357026717, -0.9130023710960994, 0.023865071743057215],
    [-0.9018293113450074, -0.9170116819634433, 0.43435471418790006, 0.023985186530479933],
    [0.4033135521287803, -0.5910163725055537, -0.9062626934382538, 0.026862281129052642],
    [-0.9104395690079364, 0.43914666014339, -0.888018710635796, 0.027393381792750318],
    [-0.10244398449503522, -0.9178994037090353, -0.9086292685077637, 0.029232664808695453],
    [-0.9137552332442404, -0.16984683146002255, -0.010401661360017411, 0.03000608795736155],
    [-0.9380989415677342, -0.15069989184082122, -0.7275875175496034, 0.03007898500466977],
    [-0.49905615616535814, -0.9547781807266791, -0.5551307150144428, 0.030324960846004972],
    [-0.8912339687875331, -0.5674717022186976, -0.8974924697322524, 0.03133189805159075],
    [-0.05573356090065362, -0.9091052514742823, -0.12866601090867436, 0.03221112523708488],
    [-0.9383550558001379, -0.6374756176581093, -0.48130722168077955, 0.03351878142745152],
    [0.022212143827153863, -0.9423454821981292, -0.5409185738546888, 0.03615671798064753],
    [-0.7520430213443632, -0.8755112010779591, -0.19269044997988238, 0.03633991457929748],
    [-0.23423899766854583, -0.205449085077114, -0.8365327435904177, 0.03758091453334277],
    [-0.012819838331959432, -0.5677206147398418, -0.9216188536049288, 0.0429883377919032],
    [-0.9323265238055521, -0.5749615477649418, 0.011283901960740694, 0.04305733418779514],
    [-0.9151393977087543, -0.027549508267680767, -0.44952794540018703, 0.043636366338055316],
    [-0.4995451074139232, -0.9094185002228328, -0.0137104640818706, 0.048733454276844106],
    [-0.5438396318898424, -0.714970740182211, -0.7437125204667646, 0.05208361326526759],
    [-0.032963439417979745, -0.5409187698728506, -0.5159648853650391, 0.05346507352177341],
    [-0.6355079015532784, -0.14318445852796258, -0.8761060769063107, 0.0554233205539646],
    [-0.5807153942587078, -0.02937288472386157, -0.6027600446615375, 0.06903949858534467],
    [-0.6706089881993432, -0.5009584678400951, -0.50018889854849, 0.07048390494136675],
    [-0.1762075927031752, -0.6834818133082197, -0.585216529718753, 0.07113840326380722],
    [-0.5993385862443938, -0.5450759000264906, -0.10209094267260443, 0.07438998373030341],
];

pub(crate) const XG_DEGREE_10: [[f64; 4]; 74] = [
    [-0.9903102209444636, -0.9903102209448534, 0.9709306628334748, 0.00050922175506544],
    [0.893439696584708, -0.9866658391032979, -0.9838649888761902, 0.0010534654863276348],
    [-0.986665839102682, -0.9229088686052511, -0.9838649888764402, 0.0010534654863358025],
    [-0.9229088686050398, 0.8934396965837044, -0.9838649888756521, 0.0010534654863422028],
    [-0.9923462161339406, 0.7480502655303354, -0.9628913698912858, 0.0022567544521929135],
    [-0.7928126795039944, -0.9923462161339122, -0.9628913698913263, 0.002256754452196212],
    [0.7480502655298646, -0.7928126795048904, -0.9628913698913089, 0.0022567544522078026],
    [-0.9652919051086307, 0.24051660258010177, -0.9351930725981674, 0.00818553898643397],
    [0.2405166025797736, -0.34003162487314365, -0.9351930725981741, 0.00818553898646017],
    [-0.3400316248725772, -0.965291905108433, -0.9351930725981473, 0.008185538986463679],
    [-0.9376373624955959, -0.7467210182428362, 0.6229544589969798, 0.008827127869980038],
    [-0.7467210182422575, -0.9385960782586072, 0.6229544589963885, 0.008827127869984219],
    [-0.9385960782585099, -0.9376373624955783, 0.6229544589959417, 0.00882712786999003],
    [0.5611444916487767, -0.9296208354624638, -0.9338528003489135, 0.00931328133999672],
    [-0.929620835462583, -0.6976708558367202, -0.9338528003488459, 0.009313281340003175],
    [-0.6976708558369646, 0.5611444916483017, -0.9338528003488542, 0.009313281340004842],
    [0.6298045658815958, -0.93296872898916, -0.7612464097278611, 0.009531695272852872],
    [-0.932968728989165, -0.9355894271645433, -0.761246409728277, 0.009531695272855826],
    [-0.9355894271645712, 0.6298045658810063, -0.7612464097273308, 0.009531695272862318],
    [0.11932017771091918, -0.6384795008595456, -0.9851224085376653, 0.010949396433080552],
    [-0.6384795008598876, -0.4957182683133582, -0.9851224085376008, 0.01094939643309527],
    [-0.49571826831393295, 0.11932017771140524, -0.9851224085375713, 0.010949396433097754],
    [-0.9394121244845914, -0.2979381466761726, -0.9346788398934707, 0.012183973248266512],
    [-0.29793814667645624, 0.17202911105450358, -0.9346788398934205, 0.01218397324827248],
    [0.172029111054955, -0.9394121244845574, -0.934678839893456, 0.012183973248279243],
    [-0.9377107750198265, 0.19854760227845358, -0.3268049472339448, 0.013566648121791506],
    [-0.9340318800246415, -0.9377107750198426, -0.32680494723497655, 0.013566648121794119],
    [0.19854760227903223, -0.9340318800246465, -0.32680494723458664, 0.01356664812180096],
    [-0.9746471367029088, -0.6709055682201692, -0.18184955197610442, 0.014989588467858826],
    [-0.6709055682199778, -0.17259774310113096, -0.1818495519759874, 0.014989588467868853],
    [-0.1725977431009278, -0.9746471367028973, -0.18184955197625718, 0.014989588467875466],
    [-0.9285218311769089, -0.9324417488177633, 0.18506574034142798, 0.015189624780024174],
    [-0.324102160347145, -0.9285218311769171, 0.18506574034179546, 0.015189624780030372],
    [-0.9324417488177208, -0.3241021603478096, 0.18506574034244472, 0.015189624780032307],
    [-0.7326801009352154, -0.7326801009347779, 0.19804030280505502, 0.015222631156663705],
    [-0.6660804613655874, -0.6660804613648394, -0.0017586159037753513, 0.01567347452275823],
    [-0.9754391428751312, -0.17479832764166015, -0.20419127562856543, 0.015755950918548495],
    [-0.6455712538545155, -0.9754391428751121, -0.20419127562881256, 0.015755950918559785],
    [-0.17479832764159575, -0.645571253854587, -0.20419127562886819, 0.015755950918602626],
    [-0.2607747102877044, -0.7709240273679507, -0.9500919558656697, 0.01651728622126276],
    [-0.770924027368317, -0.018209306478005782, -0.9500919558655241, 0.01651728622129345],
    [-0.018209306478894183, -0.26077471028756605, -0.9500919558655204, 0.016517286221297934],
    [-0.8339501062360728, 0.4564189619948542, -0.9230064362620123, 0.01667130533371332],
    [0.4564189619941377, -0.6994624194964896, -0.9230064362620093, 0.01667130533372228],
    [-0.6994624194965924, -0.8339501062356645, -0.9230064362620705, 0.016671305333733278],
    [-0.966380817060802, -0.19124597102326757, -0.6773257156578498, 0.016757487874959145],
    [-0.16504749625818405, -0.9663808170607028, -0.6773257156578376, 0.01675748787498492],
    [-0.19124597102326324, -0.16504749625837944, -0.6773257156576789, 0.0167574878750022],
    [-0.6607723048791954, 0.26785606878060353, -0.6532782814524827, 0.01753135755551264],
    [-0.9538054824488871, -0.6607723048792107, -0.6532782814525364, 0.017531357555515426],
    [0.2678560687807139, -0.9538054824488602, -0.6532782814526796, 0.017531357555525425],
    [-0.9513179433594711, 0.2671751306285217, -0.669893889306985, 0.01827560624230716],
    [-0.6459632979621066, -0.951317943359453, -0.6698938893072501, 0.018275606242313492],
    [0.26717513062879616, -0.6459632979621646, -0.6698938893072012, 0.01827560624231836],
    [-0.9412897662792556, -0.6519924690908427, 0.24168302087144355, 0.022219239273404242],
    [-0.6519924690907444, -0.6484007855015699, 0.2416830208715528, 0.02221923927340944],
    [-0.6484007855013953, -0.9412897662791637, 0.24168302087128302, 0.022219239273435987],
    [-0.7757512270700417, 0.06517784730010345, -0.5275160823084778, 0.027560791114680225],
    [-0.761910537921435, -0.775751227069954, -0.5275160823086025, 0.02756079111473213],
    [0.06517784729987142, -0.761910537921448, -0.5275160823086784, 0.027560791114736572],
    [-0.7613548130165169, -0.09302815128201258, -0.7428872152800834, 0.033876101134869184],
    [-0.40272982042132976, -0.761354813016166, -0.7428872152804734, 0.033876101134876054],
    [-0.09302815128242103, -0.40272982042127203, -0.7428872152800944, 0.03387610113488514],
    [-0.3959961853467098, -0.34330895705231745, -0.3939477421158102, 0.03576925978360341],
    [-0.34330895705234377, -0.8667471154851956, -0.39394774211629024, 0.035769259783611826],
    [-0.866747115485375, -0.3959961853465118, -0.3939477421158436, 0.03576925978361611],
    [0.03183363322854893, -0.735065978510457, -0.785107076829883, 0.03643106559328949],
    [-0.7350659785107159, -0.511660577888192, -0.7851070768296918, 0.036431065593294065],
    [-0.5116605778886708, 0.031833633228882885, -0.7851070768296162, 0.03643106559330695],
    [-0.36358759835935195, -0.36358759835881516, -0.9092372049227425, 0.03721542358429882],
    [-0.7585737767283827, -0.32097387475772376, -0.17781468501026576, 0.037456749939889095],
    [-0.3209738747581966, -0.742637663503739, -0.17781468501008335, 0.03745674993992172],
    [-0.7426376635036129, -0.7585737767282887, -0.17781468500997777, 0.03745674993992857],
    [-0.48585603847514436, -0.48585603847489856, -0.5424318845750749, 0.06210469597922561],
];

